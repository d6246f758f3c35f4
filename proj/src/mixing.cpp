#include "symblend/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "symblend/rng.hpp"

namespace symblend {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double local_multiplier(const FiberMap& f, const Vec& x, bool lower) {
  auto [l, h] = f.lipschitz(Box::cube(x, 1e-9));
  return lower ? l : h;
}

// Largest ρ = side·2^{−j} with g contracting on the ρ-cube around its fixed point.
double capture_radius(const FiberMap& g, const Vec& c, const Box& window) {
  for (int j = 1; j < 60; ++j) {
    double r = std::ldexp(window.max_side(), -j);
    if (g.lipschitz(Box::cube(c, r)).second < 1) return r;
  }
  return 0;
}

std::vector<Vec> grid_centers(const Box& window, int resolution) {
  const int per = 1 << resolution;
  const int dim = window.dim();
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Vec c(dim);
    for (int a = 0; a < dim; ++a) c(a) = window.lo(a) + (idx[static_cast<std::size_t>(a)] + 0.5) * window.sides()(a) / per;
    out.push_back(c);
    int a = 0;
    while (a < dim && ++idx[static_cast<std::size_t>(a)] == per) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == dim) break;
  }
  return out;
}

Vec fixed_point_near(const FiberMap& f, Vec x, bool repelling) {
  for (int it = 0; it < 100000; ++it) {
    Vec y = repelling ? f.inverse_apply(x) : f(x);
    double step = sup_dist(x, y);
    x = y;
    if (step < 1e-15) break;
  }
  return x;
}

std::optional<Box> cut(const std::optional<Box>& a, const Box& b) {
  if (!a) return std::nullopt;
  auto c = a->intersect(b);
  if (!c || !(c->min_side() > 0)) return std::nullopt;
  return c;
}

double volume(const Box& b) { return b.sides().prod(); }

}  // namespace

const char* to_string(Direction d) { return d == Direction::Stable ? "stable" : "unstable"; }

Json DensityReport::to_json() const {
  Json j;
  j["passed"] = passed();
  if (rejected) {
    j["rejected"] = true;
    j["reason"] = reason;
    return j;
  }
  j["cells"] = cells;
  j["reached"] = reached;
  j["fraction"] = measured(fraction());
  j["worst_length"] = worst_length;
  j["resolution"] = resolution;
  j["horizon"] = horizon;
  if (worst_cell) j["unreached_cell"] = symblend::to_json(*worst_cell);
  return j;
}

DensityReport density_check(const std::vector<FiberMap>& maps, const Box& window, int symbol, const Vec& point,
                            Direction direction, int resolution, int horizon) {
  DensityReport rep;
  rep.resolution = resolution;
  rep.horizon = horizon;
  const int d = static_cast<int>(maps.size());
  if (symbol < 1 || symbol > d) {
    rep.rejected = true;
    rep.reason = "no fiber map for symbol " + std::to_string(symbol);
    return rep;
  }
  const FiberMap& f = maps[static_cast<std::size_t>(symbol - 1)];
  if (sup_dist(f(point), point) > 1e-9) {
    rep.rejected = true;
    rep.reason = "the point is not fixed by its fiber map";
    return rep;
  }
  const bool stable = direction == Direction::Stable;
  if (stable ? !(local_multiplier(f, point, false) < 1) : !(local_multiplier(f, point, true) > 1)) {
    rep.rejected = true;
    rep.reason = std::string("direction ") + to_string(direction) + " does not match the fixed point type";
    return rep;
  }
  const FiberMap g = stable ? f : f.inverse();
  const double rho = capture_radius(g, point, window);
  const Box capture = Box::cube(point, rho);
  for (const auto& w : all_words(d, 2)) {
    for (const auto& c : grid_centers(window, resolution)) {
      ++rep.cells;
      // Cylinder (ξ_{−1}, ξ_0) = w; the rest of the sequence is the fixed symbol.
      Vec y = stable ? maps[static_cast<std::size_t>(w[1] - 1)](c) : maps[static_cast<std::size_t>(w[0] - 1)].inverse_apply(c);
      int steps = 1;
      while (!capture.contains_open(y) && steps < horizon) {
        y = g(y);
        ++steps;
      }
      if (capture.contains_open(y)) {
        ++rep.reached;
        rep.worst_length = std::max(rep.worst_length, steps);
      } else if (!rep.worst_cell) {
        rep.worst_cell = c;
      }
    }
  }
  return rep;
}

Json ActivationStep::to_json() const {
  Json j;
  j["n"] = n;
  j["valid"] = valid;
  if (!reason.empty()) j["reason"] = reason;
  j["measured_holder"] = measured(measured_holder);
  j["holder_bound"] = bound(holder_bound);
  j["success"] = success;
  if (success) {
    j["margin"] = measured(margin);
    j["return_error"] = measured(return_error);
  }
  return j;
}

Json ActivationReport::to_json() const {
  Json j;
  j["passed"] = passed();
  if (rejected) {
    j["rejected"] = true;
    j["reason"] = reason;
    return j;
  }
  if (first_success) j["first_success"] = *first_success;
  Json st = Json::array();
  for (const auto& s : steps) st.push_back(s.to_json());
  j["steps"] = st;
  return j;
}

ActivationReport blender_activation(const SkewProduct& psi_hat, int k, int repeller, const Vec& q, const BiSequence& xi,
                                    const Vec& x, const IntersectionSetup& setup, double delta, int n_lo, int n_hi, int N,
                                    std::uint64_t seed) {
  ActivationReport rep;
  auto reject = [&](std::string why) {
    rep.rejected = true;
    rep.reason = std::move(why);
    return rep;
  };
  if (!setup.B.contains_open(q)) return reject("the repelling point q is not in B");
  if (repeller < 1 || repeller > psi_hat.k()) return reject("no fiber map for the repelling symbol");
  const BiSequence v = BiSequence::constant(repeller);
  const FiberMap& fq = psi_hat.at(v, 0);
  if (sup_dist(fq(q), q) > 1e-9) return reject("q is not fixed by the repelling fiber map");
  if (!(local_multiplier(fq, q, true) > 1)) return reject("q is not fiber-repelling");
  for (long j = 1; j <= 64; ++j)
    if (xi[-j] != repeller) return reject("the base sequence is not in the local unstable set of the repelling sequence");
  const double na = std::pow(psi_hat.nu(), psi_hat.alpha());
  if (!(na < psi_hat.lambda())) return reject("needs nu^alpha < lambda");
  const double C = psi_hat.holder() / (1 - na / psi_hat.lambda());

  Rng rng(seed);
  for (int n = n_lo; n <= n_hi; ++n) {
    ActivationStep st;
    st.n = n;
    st.holder_bound = C;
    const BiSequence eta = xi.shift(-n);
    auto h = [&psi_hat, x, n](const BiSequence& z) {
      Vec y = x;
      for (long j = 1; j <= n; ++j) y = psi_hat.at(z, n - j).inverse_apply(y);
      return y;
    };
    auto H = HorizontalDisk::graph(eta, h(eta), h, C, delta, psi_hat.alpha(), psi_hat.nu());
    auto val = validate_disk(H, setup.B, psi_hat.k(), 64, rng);
    st.measured_holder = val.measured_holder;
    st.valid = val.valid;
    if (!val.valid) {
      st.reason = val.reason + " (try a larger n)";
      rep.steps.push_back(st);
      continue;
    }
    auto res = embedded_disk_intersect(psi_hat, k, setup, H, N, rng.next());
    st.success = res.success;
    if (res.success) {
      st.margin = res.min_margin;
      Vec f = res.x;
      for (long j = 0; j < n; ++j) f = psi_hat.at(res.xi, j)(f);
      st.return_error = sup_dist(f, x);
      if (!rep.first_success) rep.first_success = n;
    } else {
      st.reason = res.failure;
    }
    rep.steps.push_back(st);
  }
  return rep;
}

Json OpenPair::to_json() const {
  Json j;
  j["U"] = {{"word", word_str(u_cyl.word)}, {"offset", u_cyl.offset}, {"box", symblend::to_json(u_box)}};
  j["V"] = {{"word", word_str(v_cyl.word)}, {"offset", v_cyl.offset}, {"box", symblend::to_json(v_box)}};
  return j;
}

std::optional<PairWitness> mixing_witness(const std::vector<FiberMap>& maps, int k, const Box& B, const OpenPair& pair, int n) {
  if (n < 1) return std::nullopt;
  const int stable = 1, unstable = k + 1;
  // Forced symbols at every index the two cylinders pin down.
  std::map<long, int> forced;
  auto pin = [&](const Cylinder& c, long shift) {
    for (std::size_t i = 0; i < c.word.size(); ++i) {
      long at = c.offset + shift + static_cast<long>(i);
      auto [it, fresh] = forced.emplace(at, c.word[i]);
      if (!fresh && it->second != c.word[i]) return false;
    }
    return true;
  };
  if (!pin(pair.u_cyl, 0) || !pin(pair.v_cyl, n)) return std::nullopt;
  long P = 0, S = 0;
  for (auto& [at, s] : forced) {
    (void)s;
    if (at >= 0 && at < n) {
      if (at <= static_cast<long>(pair.u_cyl.offset + pair.u_cyl.word.size()) - 1) P = std::max(P, at + 1);
      else S = std::max(S, n - at);
    }
  }
  const long M = n - P - S;
  if (M < 0) return std::nullopt;
  auto sym = [&](long at, int dflt) {
    auto it = forced.find(at);
    return it == forced.end() ? dflt : it->second;
  };
  auto map_of = [&](int s) -> const FiberMap& { return maps[static_cast<std::size_t>(s - 1)]; };

  Box S0 = pair.u_box;
  for (long i = 0; i < P; ++i) S0 = map_of(sym(i, stable)).image(S0);
  Box T0 = pair.v_box;
  for (long i = n - 1; i >= n - S; --i) T0 = map_of(sym(i, unstable)).preimage(T0);

  std::vector<Box> SA{S0};
  for (long a = 1; a <= M; ++a) SA.push_back(map_of(stable).image(SA.back()));
  Box TB = T0;
  for (long b = 0; b <= M; ++b) {
    if (b > 0) TB = map_of(unstable).preimage(TB);
    // Steer backwards from T_b through the covering maps, keeping the largest piece inside B.
    std::optional<Box> R = cut(TB, B);
    Word chosen;
    for (long c = 0; c + b <= M && R; ++c) {
      long a = M - b - c;
      if (auto hit = cut(R, SA[static_cast<std::size_t>(a)])) {
        Word connector(chosen.rbegin(), chosen.rend());
        Word fiber;
        for (long i = 0; i < P; ++i) fiber.push_back(sym(i, stable));
        fiber.insert(fiber.end(), static_cast<std::size_t>(a), stable);
        fiber.insert(fiber.end(), connector.begin(), connector.end());
        fiber.insert(fiber.end(), static_cast<std::size_t>(b), unstable);
        for (long i = n - S; i < n; ++i) fiber.push_back(sym(i, unstable));
        // Pull the middle of the hit back to the source box, then check the whole orbit forwards.
        Vec z = hit->center();
        for (long i = 0; i < a; ++i) z = map_of(stable).inverse_apply(z);
        for (long i = P - 1; i >= 0; --i) z = map_of(fiber[static_cast<std::size_t>(i)]).inverse_apply(z);
        Vec y = z;
        for (int s : fiber) y = map_of(s)(y);
        double margin = std::min(pair.u_box.point_depth(z), pair.v_box.point_depth(y));
        if (!(margin > 0)) break;
        Word past;
        for (long i = pair.u_cyl.offset; i < 0; ++i) past.push_back(sym(i, stable));
        long end = std::max<long>(n, n + pair.v_cyl.offset + static_cast<long>(pair.v_cyl.word.size()));
        Word future = fiber;
        for (long i = n; i < end; ++i) future.push_back(sym(i, stable));
        BiSequence xi(past, {stable}, future, {stable});
        if (!pair.u_cyl.contains(xi) || !pair.v_cyl.contains(xi.shift(n))) return std::nullopt;
        return PairWitness{n, xi, z, margin};
      }
      if (c + b == M) break;
      int best = 0;
      std::optional<Box> next;
      for (int i = 1; i <= k; ++i) {
        auto cand = cut(map_of(i).preimage(*R), B);
        if (cand && (!next || volume(*cand) > volume(*next))) next = cand, best = i;
      }
      if (!best) break;
      chosen.push_back(best);
      R = next;
    }
  }
  return std::nullopt;
}

std::vector<OpenPair> random_pairs(int d, const Box& window, int count, Rng& rng) {
  std::vector<OpenPair> out;
  auto cylinder = [&] {
    Cylinder c;
    int len = rng.integer(1, 2);
    c.offset = rng.integer(-1, 1);
    c.word = rng.word(d, len);
    return c;
  };
  auto box = [&] {
    Vec lo(window.dim()), hi(window.dim());
    for (int a = 0; a < window.dim(); ++a) {
      double side = window.sides()(a) / 16;
      lo(a) = rng.uniform(window.lo(a), window.hi(a) - side);
      hi(a) = lo(a) + side;
    }
    return Box(lo, hi);
  };
  for (int i = 0; i < count; ++i) {
    OpenPair p;
    p.u_cyl = cylinder();
    p.u_box = box();
    p.v_cyl = cylinder();
    p.v_box = box();
    out.push_back(std::move(p));
  }
  return out;
}

Json MixingScenario::to_json() const {
  Json j;
  j["k"] = k;
  j["alpha"] = alpha;
  j["nu"] = nu;
  j["window"] = symblend::to_json(window);
  Json ms = Json::array();
  for (const auto& f : maps) ms.push_back(symblend::to_json(f));
  j["maps"] = ms;
  j["D"] = symblend::to_json(D);
  j["B"] = symblend::to_json(B);
  j["p"] = symblend::to_json(p);
  j["q"] = symblend::to_json(q);
  return j;
}

MixingScenario MixingScenario::from_json(const Json& j) {
  const std::string w = "scenario";
  if (!j.is_object()) throw ParseError(w + ": expected an object");
  MixingScenario s;
  const Json& kj = field(j, "k", w);
  if (!kj.is_number_integer() || kj.get<int>() < 1) throw ParseError(w + ".k: expected a positive integer");
  s.k = kj.get<int>();
  s.alpha = j.value("alpha", 1.0);
  s.nu = j.value("nu", 0.5);
  s.window = box_from_json(field(j, "window", w), w + ".window");
  const Json& ms = field(j, "maps", w);
  if (!ms.is_array()) throw ParseError(w + ".maps: expected an array");
  for (std::size_t i = 0; i < ms.size(); ++i) s.maps.push_back(fiber_map_from_json(ms[i], w + ".maps[" + std::to_string(i) + "]"));
  if (s.d() < s.k) throw ParseError(w + ".maps: need at least k maps");
  s.D = box_from_json(field(j, "D", w), w + ".D");
  s.B = box_from_json(field(j, "B", w), w + ".B");
  s.p = vec_from_json(field(j, "p", w), w + ".p");
  s.q = vec_from_json(field(j, "q", w), w + ".q");
  return s;
}

Json MixingReport::to_json() const {
  Json j;
  j["passed"] = passed();
  if (!passed()) j["failed_stage"] = failed_stage();
  j["stages"] = stages_json();
  j["max_n0"] = max_n0;
  j["pairs"] = pairs;
  j["perturbations"] = perturbations;
  return j;
}

MixingReport verify_mixing(const MixingScenario& s, const MixingConfig& cfg) {
  MixingReport rep;
  const int k = s.k, d = s.d();
  const double na = std::pow(s.nu, s.alpha);
  {
    std::string why;
    if (!s.B.contains_open(s.p)) why = "p is not in B";
    else if (d > k && !s.B.contains_open(s.q)) why = "q is not in B";
    else if (sup_dist(s.maps[0](s.p), s.p) > 1e-9 || !(local_multiplier(s.maps[0], s.p, false) < 1)) why = "p is not an attracting fixed point of phi_1";
    else if (d > k && (sup_dist(s.maps[static_cast<std::size_t>(k)](s.q), s.q) > 1e-9 || !(local_multiplier(s.maps[static_cast<std::size_t>(k)], s.q, true) > 1)))
      why = "q is not a repelling fixed point of phi_{k+1}";
    for (std::size_t i = 0; i < s.maps.size() && why.empty(); ++i)
      if (!s.maps[i].image(s.window).inside_closed(s.window.inflated(1e-12))) why = "phi_" + std::to_string(i + 1) + " does not preserve the fiber window";
    Json dj;
    if (why.empty()) {
      auto hat = SkewProduct::one_step(s.maps, s.window, s.alpha, s.nu);
      dj["lambda"] = computed(hat.lambda());
      dj["beta"] = computed(hat.beta());
      if (!(na < hat.lambda() && hat.beta() < 1 / na)) why = "the skew product is not dominated";
    }
    rep.add("hypotheses", why.empty(), why, dj);
    if (!why.empty()) return rep;
  }
  const std::vector<FiberMap> cover(s.maps.begin(), s.maps.begin() + k);
  auto cov = covering_check(IFS{cover, s.D}, s.B, cfg.resolution);
  rep.add("covering", cov.verified(), cov.verified() ? "" : "B is not covered", cov.to_json());
  if (!cov.verified()) return rep;

  BlenderConfig bc;
  bc.budget = cfg.budget;
  bc.depth = cfg.depth;
  bc.disks = cfg.blender_disks;
  bc.perturbations = cfg.blender_perturbations;
  bc.resolution = cfg.resolution;
  bc.seed = cfg.seed;
  auto cs = certify_blender(SkewProduct::one_step(cover, s.D, s.alpha, s.nu), s.B, bc);
  {
    Json dj;
    dj["L"] = bound(cs.L);
    dj["delta_max"] = bound(cs.delta_max);
    dj["disks_tested"] = cs.tested.size();
    rep.add("cs blender", cs.passed, cs.reason, dj);
  }

  auto ds = density_check(s.maps, s.window, 1, s.p, Direction::Stable, cfg.density_resolution, cfg.horizon);
  rep.add("density stable", ds.passed(), ds.rejected ? ds.reason : "", ds.to_json());
  if (d > k) {
    auto du = density_check(s.maps, s.window, k + 1, s.q, Direction::Unstable, cfg.density_resolution, cfg.horizon);
    rep.add("density unstable", du.passed(), du.rejected ? du.reason : "", du.to_json());
  } else {
    rep.add("density unstable", false, "no fiber-repelling map: d = k");
    return rep;
  }

  {
    IntersectionSetup setup;
    setup.B = s.B;
    setup.k_used = k;
    setup.members = blender_members(SkewProduct::one_step(cover, s.D, s.alpha, s.nu), s.B, cfg.budget);
    setup.L = cs.L;
    Rng rng(cfg.seed);
    BiSequence xi(Word{}, {k + 1}, rng.word(d, 4), {1});
    Vec x = s.window.lo + 0.2 * s.window.sides();
    auto act = blender_activation(SkewProduct::one_step(s.maps, s.D, s.alpha, s.nu), k, k + 1, s.q, xi, x, setup, cs.delta_max, 1,
                                  30, cfg.depth, cfg.seed);
    rep.add("activation", act.passed(), act.rejected ? act.reason : (act.passed() ? "" : "no n in range activated the blender"),
            act.to_json());
  }

  {
    Vec pa = fixed_point_near(s.maps[0], s.p, false);
    Vec qr = fixed_point_near(s.maps[static_cast<std::size_t>(k)], s.q, true);
    double ma = local_multiplier(s.maps[0], pa, false), mr = local_multiplier(s.maps[static_cast<std::size_t>(k)], qr, true);
    Json dj;
    dj["attracting"] = {{"symbol", 1}, {"point", to_json(pa)}, {"multiplier", computed(ma)}};
    dj["repelling"] = {{"symbol", k + 1}, {"point", to_json(qr)}, {"multiplier", computed(mr)}};
    rep.add("non-hyperbolicity", ma < 1 && mr > 1, "", dj);
  }

  if (cfg.horizon < 1) {
    rep.add("pairs", false, "horizon 0 leaves nothing to witness");
    return rep;
  }
  Rng rng(cfg.seed);
  const auto pairs = random_pairs(d, s.window, cfg.pairs, rng);
  bool all = true;
  std::string first_fail;
  for (int p = 0; p <= cfg.perturbations; ++p) {
    std::vector<FiberMap> maps = s.maps;
    if (p > 0)
      for (auto& f : maps) f = perturb_map(f, cfg.budget, rng, true);
    int worst = 0, failed = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      int n0 = cfg.horizon + 1;
      std::optional<PairWitness> at_n0;
      for (int n = cfg.horizon; n >= 1; --n) {
        auto w = mixing_witness(maps, k, s.B, pairs[i], n);
        if (!w) break;
        n0 = n;
        at_n0 = std::move(w);
      }
      bool ok = n0 <= cfg.n0_max;
      if (!ok) {
        ++failed;
        if (first_fail.empty()) first_fail = "perturbation " + std::to_string(p) + ", pair " + std::to_string(i);
      }
      worst = std::max(worst, n0);
      if (p == 0) {
        Json e = pairs[i].to_json();
        e["n0"] = n0;
        e["witnessed"] = ok;
        if (at_n0) {
          e["witness"] = {{"n", at_n0->n}, {"xi", at_n0->xi.str()}, {"x", to_json(at_n0->x)}, {"margin", computed(at_n0->margin)}};
        }
        rep.pairs.push_back(e);
      }
    }
    all = all && failed == 0;
    rep.max_n0 = std::max(rep.max_n0, worst);
    rep.perturbations.push_back({{"perturbation", p}, {"max_n0", worst}, {"unwitnessed", failed}});
  }
  rep.add("pairs", all, first_fail, {{"pairs", cfg.pairs}, {"horizon", cfg.horizon}, {"n0_max", cfg.n0_max}, {"max_n0", rep.max_n0}});
  return rep;
}

}  // namespace symblend
