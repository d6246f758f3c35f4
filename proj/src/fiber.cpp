#include "symblend/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "symblend/rng.hpp"

namespace symblend {

namespace {

double pl_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  std::size_t i;
  if (x <= xs.front()) i = 0;
  else if (x >= xs.back()) i = xs.size() - 2;
  else i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  i = std::min(i, xs.size() - 2);
  double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + s * (x - xs[i]);
}

std::vector<Vec> grid_points(const Box& D, int per_axis) {
  const int c = D.dim();
  std::vector<Vec> pts;
  std::vector<int> idx(static_cast<std::size_t>(c), 0);
  while (true) {
    Vec x(c);
    for (int j = 0; j < c; ++j)
      x(j) = D.lo(j) + (D.hi(j) - D.lo(j)) * idx[static_cast<std::size_t>(j)] / (per_axis - 1);
    pts.push_back(x);
    int j = 0;
    while (j < c && ++idx[static_cast<std::size_t>(j)] == per_axis) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == c) break;
  }
  return pts;
}

Vec affine_inverse_b(const Vec& a, const Vec& b) { return (-b.array() / a.array()).matrix(); }

}  // namespace

FiberMap FiberMap::affine(Vec a, Vec b) {
  if (a.size() != b.size() || a.size() < 1 || a.size() > 3) throw std::invalid_argument("affine map: bad dimensions");
  if ((a.array() == 0).any()) throw std::invalid_argument("affine map: zero diagonal entry is not invertible");
  FiberMap m;
  m.kind_ = MapKind::Affine;
  m.dim_ = static_cast<int>(a.size());
  m.a_ = std::move(a);
  m.b_ = std::move(b);
  return m;
}

FiberMap FiberMap::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("pl map: need at least two knots");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]) || !(ys[i] > ys[i - 1])) throw std::invalid_argument("pl map: knots must be strictly increasing");
  FiberMap m;
  m.kind_ = MapKind::PiecewiseLinear;
  m.dim_ = 1;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(ys);
  return m;
}

FiberMap FiberMap::user(int dim, std::function<Vec(const Vec&)> f, std::function<Vec(const Vec&)> finv, double lambda,
                        double beta, const Box& verify_on, std::uint64_t seed) {
  if (!(lambda > 0 && beta >= lambda)) throw std::invalid_argument("user map: need 0 < lambda <= beta");
  FiberMap m;
  m.kind_ = MapKind::User;
  m.dim_ = dim;
  m.f_ = std::make_shared<std::function<Vec(const Vec&)>>(std::move(f));
  m.finv_ = std::make_shared<std::function<Vec(const Vec&)>>(std::move(finv));
  m.lam_ = lambda;
  m.bet_ = beta;
  Rng rng(seed);
  auto sample = [&] {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x(j) = rng.uniform(verify_on.lo(j), verify_on.hi(j));
    return x;
  };
  for (int s = 0; s < 10000; ++s) {
    Vec x = sample(), y = sample();
    double d = sup_dist(x, y), e = sup_dist(m(x), m(y));
    if (e < lambda * d * (1 - 1e-12) - 1e-12 || e > beta * d * (1 + 1e-12) + 1e-12)
      throw std::invalid_argument("user map violates its declared Lipschitz bounds");
    if (sup_dist(m.inverse_apply(m(x)), x) > 1e-12 * (1 + sup_norm(x)))
      throw std::invalid_argument("user map inverse does not invert the map");
  }
  return m;
}

Vec FiberMap::operator()(const Vec& x) const {
  switch (kind_) {
    case MapKind::Affine: return (a_.array() * x.array() + b_.array()).matrix();
    case MapKind::PiecewiseLinear: return vec({pl_eval(xs_, ys_, x(0))});
    default: return (*f_)(x);
  }
}

Vec FiberMap::inverse_apply(const Vec& y) const {
  switch (kind_) {
    case MapKind::Affine: return ((y.array() - b_.array()) / a_.array()).matrix();
    case MapKind::PiecewiseLinear: return vec({pl_eval(ys_, xs_, y(0))});
    default: return (*finv_)(y);
  }
}

FiberMap FiberMap::inverse() const {
  switch (kind_) {
    case MapKind::Affine: return affine(a_.cwiseInverse(), affine_inverse_b(a_, b_));
    case MapKind::PiecewiseLinear: return piecewise_linear(ys_, xs_);
    default: {
      FiberMap m = *this;
      std::swap(m.f_, m.finv_);
      m.lam_ = 1 / bet_;
      m.bet_ = 1 / lam_;
      return m;
    }
  }
}

FiberMap FiberMap::translated(const Vec& t) const {
  switch (kind_) {
    case MapKind::Affine: return affine(a_, b_ + t);
    case MapKind::PiecewiseLinear: {
      auto ys = ys_;
      for (auto& y : ys) y += t(0);
      return piecewise_linear(xs_, ys);
    }
    default: {
      FiberMap m = *this;
      auto f = f_, finv = finv_;
      m.f_ = std::make_shared<std::function<Vec(const Vec&)>>([f, t](const Vec& x) { return Vec((*f)(x) + t); });
      m.finv_ = std::make_shared<std::function<Vec(const Vec&)>>([finv, t](const Vec& y) { return (*finv)(Vec(y - t)); });
      return m;
    }
  }
}

std::pair<double, double> FiberMap::lipschitz(const Box& domain) const {
  switch (kind_) {
    case MapKind::Affine: return {a_.cwiseAbs().minCoeff(), a_.cwiseAbs().maxCoeff()};
    case MapKind::PiecewiseLinear: {
      const double l = domain.lo(0), h = domain.hi(0);
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      const std::size_t n = xs_.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = i == 0 ? -std::numeric_limits<double>::infinity() : xs_[i];
        double b = i + 2 == n ? std::numeric_limits<double>::infinity() : xs_[i + 1];
        bool meets = l < h ? (a < h && b > l) : (a <= l && l <= b);
        if (!meets) continue;
        double s = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      return {lo, hi};
    }
    default: return {lam_, bet_};
  }
}

Box FiberMap::image(const Box& b) const {
  switch (kind_) {
    case MapKind::Affine: {
      Vec p = (*this)(b.lo), q = (*this)(b.hi);
      return {p.cwiseMin(q), p.cwiseMax(q)};
    }
    case MapKind::PiecewiseLinear: return {(*this)(b.lo), (*this)(b.hi)};
    default: {
      // Sampled hull padded by β·(half grid spacing): an enclosure under the declared bound.
      auto pts = grid_points(b, 33);
      Box h{(*this)(pts.front()), (*this)(pts.front())};
      for (const auto& x : pts) {
        Vec y = (*this)(x);
        h = h.hull(Box{y, y});
      }
      return h.inflated(bet_ * b.max_side() / 64);
    }
  }
}

Box FiberMap::preimage(const Box& b) const { return inverse().image(b); }

double FiberMap::c0_distance(const FiberMap& g, const Box& D, bool inverses) const {
  if (g.dim_ != dim_ || D.dim() != dim_) throw std::invalid_argument("c0_distance: dimension mismatch");
  if (inverses) return inverse().c0_distance(g.inverse(), D, false);
  if (kind_ == MapKind::Affine && g.kind_ == MapKind::Affine) {
    double d = 0;
    for (int j = 0; j < dim_; ++j)
      for (double x : {D.lo(j), D.hi(j)}) d = std::max(d, std::abs((a_(j) - g.a_(j)) * x + (b_(j) - g.b_(j))));
    return d;
  }
  if (dim_ == 1 && kind_ != MapKind::User && g.kind_ != MapKind::User) {
    std::set<double> xs{D.lo(0), D.hi(0)};
    for (const auto* m : {this, &g})
      for (double x : m->xs_)
        if (x > D.lo(0) && x < D.hi(0)) xs.insert(x);
    double d = 0;
    for (double x : xs) d = std::max(d, std::abs((*this)(vec({x}))(0) - g(vec({x}))(0)));
    return d;
  }
  double d = 0;
  for (const auto& x : grid_points(D, 257)) d = std::max(d, sup_dist((*this)(x), g(x)));
  return d;
}

bool PHConstants::s_domination() const { return std::pow(nu, alpha) < lambda; }
bool PHConstants::u_domination() const { return beta < std::pow(nu, -alpha); }
bool PHConstants::partially_hyperbolic() const {
  return std::pow(nu, alpha) < lambda && lambda < 1 && 1 < beta && beta < std::pow(nu, -alpha);
}

SkewProduct::SkewProduct(int k, int depth, std::vector<FiberMap> table, Box D, double alpha, double nu)
    : k_(k), depth_(depth), table_(std::move(table)), D_(std::move(D)), alpha_(alpha), nu_(nu) {
  if (k < 1) throw std::invalid_argument("skew product: need k >= 1");
  if (depth < 0) throw std::invalid_argument("skew product: negative depth");
  if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("skew product: alpha must lie in (0,1]");
  if (!(nu > 0 && nu < 1)) throw std::invalid_argument("skew product: nu must lie in (0,1)");
  std::size_t expect = 1;
  for (int i = 0; i < 2 * depth + 1; ++i) expect *= static_cast<std::size_t>(k);
  if (table_.size() != expect)
    throw std::invalid_argument("skew product: table has " + std::to_string(table_.size()) + " entries, expected " +
                                std::to_string(expect));
  lambda_ = std::numeric_limits<double>::infinity();
  for (const auto& m : table_) {
    if (m.dim() != D_.dim()) throw std::invalid_argument("skew product: fiber map dimension differs from D");
    auto [l, b] = m.lipschitz(D_);
    lambda_ = std::min(lambda_, l);
    beta_ = std::max(beta_, b);
  }
  holder_ = holder_constant(*this);
}

bool SkewProduct::certified() const {
  return std::all_of(table_.begin(), table_.end(), [](const FiberMap& m) { return m.certified(); });
}

std::size_t SkewProduct::code(const Word& w) const {
  if (w.size() != static_cast<std::size_t>(2 * depth_ + 1)) throw std::invalid_argument("central word has wrong length");
  std::size_t c = 0;
  for (int s : w) {
    if (s < 1 || s > k_) throw std::invalid_argument("symbol " + std::to_string(s) + " outside 1.." + std::to_string(k_));
    c = c * static_cast<std::size_t>(k_) + static_cast<std::size_t>(s - 1);
  }
  return c;
}

Word SkewProduct::central_word(std::size_t c) const {
  Word w(static_cast<std::size_t>(2 * depth_ + 1));
  for (std::size_t i = w.size(); i-- > 0;) {
    w[i] = static_cast<int>(c % static_cast<std::size_t>(k_)) + 1;
    c /= static_cast<std::size_t>(k_);
  }
  return w;
}

const FiberMap& SkewProduct::at(const BiSequence& xi, long j) const {
  std::size_t c = 0;
  for (long i = j - depth_; i <= j + depth_; ++i) {
    int s = xi[i];
    if (s > k_) throw std::invalid_argument("sequence symbol " + std::to_string(s) + " exceeds k = " + std::to_string(k_));
    c = c * static_cast<std::size_t>(k_) + static_cast<std::size_t>(s - 1);
  }
  return table_[c];
}

const FiberMap& SkewProduct::symbol_map(int i) const {
  if (depth_ != 0) throw std::logic_error("symbol_map needs a one-step skew product");
  return table_.at(static_cast<std::size_t>(i - 1));
}

std::vector<FiberMap> SkewProduct::one_step_maps() const {
  if (depth_ != 0) throw std::logic_error("one_step_maps needs a one-step skew product");
  return table_;
}

SkewProduct SkewProduct::with_domain(const Box& D) const { return {k_, depth_, table_, D, alpha_, nu_}; }

SkewProduct SkewProduct::lifted(int depth) const {
  if (depth < depth_) throw std::invalid_argument("cannot lift to a smaller depth");
  if (depth == depth_) return *this;
  SkewProduct probe = *this;
  std::vector<FiberMap> table;
  std::size_t n = 1;
  for (int i = 0; i < 2 * depth + 1; ++i) n *= static_cast<std::size_t>(k_);
  const auto cut = static_cast<long>(depth - depth_);
  for (std::size_t c = 0; c < n; ++c) {
    Word w(static_cast<std::size_t>(2 * depth + 1));
    std::size_t r = c;
    for (std::size_t i = w.size(); i-- > 0;) {
      w[i] = static_cast<int>(r % static_cast<std::size_t>(k_)) + 1;
      r /= static_cast<std::size_t>(k_);
    }
    table.push_back(entry(Word(w.begin() + cut, w.end() - cut)));
  }
  return {k_, depth, std::move(table), D_, alpha_, nu_};
}

SkewProduct SkewProduct::restricted(int k) const {
  if (k < 1 || k > k_) throw std::invalid_argument("restricted: bad symbol count");
  std::vector<FiberMap> table;
  for (const auto& w : all_words(k, 2 * depth_ + 1)) table.push_back(entry(w));
  return {k, depth_, std::move(table), D_, alpha_, nu_};
}

std::vector<std::string> SkewProduct::regime_violations() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < table_.size(); ++c) {
    Box img = table_[c].image(D_);
    if (contracting() && !img.inside_open(D_))
      out.push_back("entry " + word_str(central_word(c)) + ": image " + img.str() + " not inside D");
    if (expanding() && !D_.inside_open(img))
      out.push_back("entry " + word_str(central_word(c)) + ": image " + img.str() + " does not contain closed D");
  }
  return out;
}

Vec compose_forward(const SkewProduct& phi, const BiSequence& xi, const Vec& x, int n, bool check) {
  Vec y = x;
  for (int j = 0; j < n; ++j) {
    y = phi.at(xi, j)(y);
    if (check && !phi.D().contains_closed(y, 1e-12 * (1 + sup_norm(y)))) throw DomainEscape(j + 1, y);
  }
  return y;
}

Vec compose_backward(const SkewProduct& phi, const BiSequence& xi, const Vec& x, int n, bool check) {
  Vec y = x;
  for (int j = 0; j < n; ++j) {
    y = phi.at(xi, -j).inverse_apply(y);
    if (check && !phi.D().contains_closed(y, 1e-12 * (1 + sup_norm(y)))) throw DomainEscape(j + 1, y);
  }
  return y;
}

double holder_constant(const SkewProduct& phi) {
  if (phi.depth() == 0) return 0.0;
  const auto& t = phi.table();
  const int m = phi.depth();
  double C = 0;
  for (std::size_t c1 = 0; c1 < t.size(); ++c1) {
    Word w1 = phi.central_word(c1);
    for (std::size_t c2 = c1 + 1; c2 < t.size(); ++c2) {
      Word w2 = phi.central_word(c2);
      if (w1[static_cast<std::size_t>(m)] != w2[static_cast<std::size_t>(m)]) continue;
      int l = m + 1;
      for (int i = 0; i < 2 * m + 1; ++i)
        if (w1[static_cast<std::size_t>(i)] != w2[static_cast<std::size_t>(i)]) l = std::min(l, std::abs(i - m));
      double diff = std::max(t[c1].c0_distance(t[c2], phi.D()), t[c1].c0_distance(t[c2], phi.D(), true));
      if (diff == 0) continue;
      C = std::max(C, diff / std::pow(phi.nu(), phi.alpha() * l));
    }
  }
  return C;
}

double skew_distance(const SkewProduct& a, const SkewProduct& b) {
  if (a.k() != b.k() || !(a.D() == b.D())) throw std::invalid_argument("skew_distance: shapes differ (k or D)");
  const int m = std::max(a.depth(), b.depth());
  SkewProduct A = a.lifted(m), B = b.lifted(m);
  double d = 0;
  for (std::size_t c = 0; c < A.table().size(); ++c) d = std::max(d, A.table()[c].c0_distance(B.table()[c], a.D()));
  return d + std::abs(a.holder() - b.holder());
}

SkewProduct inverse_skew_product(const SkewProduct& phi) {
  std::vector<FiberMap> table;
  for (std::size_t c = 0; c < phi.table().size(); ++c) table.push_back(phi.entry(reversed(phi.central_word(c))).inverse());
  return {phi.k(), phi.depth(), std::move(table), phi.D(), phi.alpha(), phi.nu()};
}

double holder_exponent(double mu, double nu) {
  if (!(mu > 0 && mu <= nu && nu < 1)) throw std::invalid_argument("holder_exponent: need 0 < mu <= nu < 1");
  return std::log(nu) / std::log(mu);
}

SkewProduct translate_entries(const SkewProduct& phi, const std::vector<Vec>& shifts) {
  if (shifts.size() != phi.table().size()) throw std::invalid_argument("translate_entries: one shift per table entry");
  std::vector<FiberMap> table;
  for (std::size_t c = 0; c < shifts.size(); ++c) table.push_back(phi.table()[c].translated(shifts[c]));
  return {phi.k(), phi.depth(), std::move(table), phi.D(), phi.alpha(), phi.nu()};
}

SkewProduct random_translation(const SkewProduct& phi, double t, Rng& rng) {
  std::vector<Vec> shifts;
  for (std::size_t c = 0; c < phi.table().size(); ++c) {
    Vec s(phi.dim());
    for (int j = 0; j < phi.dim(); ++j) s(j) = rng.uniform(-t, t);
    shifts.push_back(s);
  }
  return translate_entries(phi, shifts);
}

FiberMap perturb_map(const FiberMap& f, double t, Rng& rng, bool keep_ends) {
  if (f.kind() == MapKind::PiecewiseLinear) {
    auto ys = f.knots_y();
    const std::size_t n = ys.size();
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto trial = ys;
      for (std::size_t i = 0; i < n; ++i)
        if (!keep_ends || (i > 0 && i + 1 < n)) trial[i] += rng.uniform(-t, t);
      bool increasing = true;
      for (std::size_t i = 1; i < n; ++i) increasing = increasing && trial[i] > trial[i - 1];
      if (increasing) return FiberMap::piecewise_linear(f.knots_x(), trial);
    }
    throw std::invalid_argument("perturb_map: knots too close for a perturbation of size " + fmt_num(t));
  }
  Vec s(f.dim());
  for (int j = 0; j < f.dim(); ++j) s(j) = rng.uniform(-t, t);
  return f.translated(s);
}

}  // namespace symblend
