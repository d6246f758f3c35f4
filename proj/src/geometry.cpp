#include "symblend/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace symblend {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vec vec_fill(int dim, double v) { return Vec::Constant(dim, v); }

std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Box::Box(Vec l, Vec h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box corners differ in dimension");
  if (lo.size() < 1 || lo.size() > 3) throw std::invalid_argument("box dimension must be 1, 2 or 3");
}

Box Box::cube(const Vec& center, double radius) { return {center.array() - radius, center.array() + radius}; }

bool Box::empty() const { return (hi.array() < lo.array()).any(); }

bool Box::contains_closed(const Vec& x, double tol) const {
  return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
}

bool Box::contains_open(const Vec& x) const { return (x.array() > lo.array()).all() && (x.array() < hi.array()).all(); }

double Box::depth_in(const Box& o) const {
  return std::min((lo - o.lo).minCoeff(), (o.hi - hi).minCoeff());
}

bool Box::inside_open(const Box& o) const { return depth_in(o) > 0; }
bool Box::inside_closed(const Box& o) const { return depth_in(o) >= 0; }

double Box::point_depth(const Vec& x) const { return std::min((x - lo).minCoeff(), (hi - x).minCoeff()); }

double Box::distance_to(const Vec& x) const {
  double d = 0;
  for (int j = 0; j < dim(); ++j) d = std::max({d, lo(j) - x(j), x(j) - hi(j)});
  return d;
}

double Box::max_distance_within(const Box& b) const {
  double d = 0;
  for (int j = 0; j < dim(); ++j) d = std::max({d, b.lo(j) - lo(j), hi(j) - b.hi(j)});
  return d;
}

Box Box::inflated(double r) const { return {lo.array() - r, hi.array() + r}; }

Box Box::hull(const Box& o) const { return {lo.cwiseMin(o.lo), hi.cwiseMax(o.hi)}; }

std::optional<Box> Box::intersect(const Box& o) const {
  Box b{lo.cwiseMax(o.lo), hi.cwiseMin(o.hi)};
  if (b.empty()) return std::nullopt;
  return b;
}

std::vector<Box> Box::split_longest() const {
  Eigen::Index j;
  (hi - lo).maxCoeff(&j);
  double mid = (lo(j) + hi(j)) / 2;
  Box a = *this, b = *this;
  a.hi(j) = mid;
  b.lo(j) = mid;
  return {a, b};
}

std::vector<Vec> Box::vertices() const {
  std::vector<Vec> out;
  const int c = dim();
  for (int mask = 0; mask < (1 << c); ++mask) {
    Vec v = lo;
    for (int j = 0; j < c; ++j)
      if (mask & (1 << j)) v(j) = hi(j);
    out.push_back(v);
  }
  return out;
}

std::string Box::str() const {
  std::string s = "[";
  for (int j = 0; j < dim(); ++j) {
    if (j) s += " x ";
    s += fmt_num(lo(j)) + "," + fmt_num(hi(j));
  }
  return s + "]";
}

const char* to_string(Containment c) {
  switch (c) {
    case Containment::Certified: return "certified";
    case Containment::Refuted: return "refuted";
    default: return "unknown";
  }
}

ContainmentResult certify_inside_union(const Box& box, const std::vector<Box>& members, int resolution) {
  const double h = std::ldexp(1.0, -resolution);
  auto covered = [&](const Vec& x) {
    for (const auto& m : members)
      if (m.contains_open(x)) return true;
    return false;
  };
  ContainmentResult res{Containment::Certified, std::nullopt};
  std::vector<Box> stack{box};
  while (!stack.empty()) {
    Box p = stack.back();
    stack.pop_back();
    bool inside = false;
    for (const auto& m : members)
      if (p.inside_open(m)) {
        inside = true;
        break;
      }
    if (inside) continue;
    auto pts = p.vertices();
    pts.push_back(p.center());
    for (const auto& x : pts)
      if (!covered(x)) return {Containment::Refuted, x};
    if (p.max_side() <= h) {
      if (res.status == Containment::Certified) res = {Containment::Unknown, p.center()};
      continue;
    }
    auto parts = p.split_longest();
    stack.push_back(parts[1]);
    stack.push_back(parts[0]);
  }
  return res;
}

namespace {

constexpr std::size_t kSnapCap = 1u << 15;

std::vector<double> key_without(const Box& b, int axis) {
  std::vector<double> k;
  for (int j = 0; j < b.dim(); ++j)
    if (j != axis) {
      k.push_back(b.lo(j));
      k.push_back(b.hi(j));
    }
  return k;
}

void merge_along(std::vector<Box>& boxes, int axis) {
  std::map<std::vector<double>, std::vector<Box>> groups;
  for (auto& b : boxes) groups[key_without(b, axis)].push_back(b);
  std::vector<Box> out;
  for (auto& [key, g] : groups) {
    std::sort(g.begin(), g.end(), [&](const Box& a, const Box& b) { return a.lo(axis) < b.lo(axis); });
    Box cur = g.front();
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (g[i].lo(axis) <= cur.hi(axis)) cur.hi(axis) = std::max(cur.hi(axis), g[i].hi(axis));
      else {
        out.push_back(cur);
        cur = g[i];
      }
    }
    out.push_back(cur);
  }
  boxes = std::move(out);
}

bool lex_less(const Box& a, const Box& b) {
  for (int j = 0; j < a.dim(); ++j) {
    if (a.lo(j) != b.lo(j)) return a.lo(j) < b.lo(j);
    if (a.hi(j) != b.hi(j)) return a.hi(j) < b.hi(j);
  }
  return false;
}

// Boxes sorted along axis 0; neighbourhood queries scan a window of lower corners.
class Index {
 public:
  explicit Index(const std::vector<Box>& boxes) : boxes_(boxes) {
    std::sort(boxes_.begin(), boxes_.end(), [](const Box& a, const Box& b) { return a.lo(0) < b.lo(0); });
    for (const auto& b : boxes_) width_ = std::max(width_, b.hi(0) - b.lo(0));
    if (!boxes_.empty()) {
      Box h = boxes_.front();
      for (const auto& b : boxes_) h = h.hull(b);
      span_ = h.max_side();
    }
  }

  template <class F>
  void within(const Vec& x, double R, F&& f) const {
    auto first = std::lower_bound(boxes_.begin(), boxes_.end(), x(0) - R - width_,
                                  [](const Box& b, double v) { return b.lo(0) < v; });
    for (auto it = first; it != boxes_.end() && it->lo(0) <= x(0) + R; ++it)
      if (it->distance_to(x) <= R) f(*it);
  }

  double distance(const Vec& x) const {
    if (boxes_.empty()) return std::numeric_limits<double>::infinity();
    double R = std::max(span_ * 1e-6, 1e-12);
    while (true) {
      double best = std::numeric_limits<double>::infinity();
      within(x, R, [&](const Box& b) { best = std::min(best, b.distance_to(x)); });
      if (best <= R) return best;
      R *= 4;
    }
  }

  const std::vector<Box>& boxes() const { return boxes_; }

 private:
  std::vector<Box> boxes_;
  double width_ = 0, span_ = 0;
};

}  // namespace

BoxSet::BoxSet(std::vector<Box> boxes, int resolution, bool do_normalize)
    : boxes_(std::move(boxes)), resolution_(resolution) {
  for (const auto& b : boxes_)
    if (b.dim() != boxes_.front().dim()) throw std::invalid_argument("BoxSet: dimension mismatch");
  if (do_normalize) normalize();
}

double BoxSet::cell() const { return std::ldexp(1.0, -resolution_); }

void BoxSet::normalize() {
  std::erase_if(boxes_, [](const Box& b) { return b.empty(); });
  if (boxes_.empty()) return;
  const int c = dim();
  if (boxes_.size() > kSnapCap) {
    const double h = cell();
    for (auto& b : boxes_) {
      if (b.max_side() >= h) continue;
      for (int j = 0; j < c; ++j) {
        b.lo(j) = std::floor(b.lo(j) / h) * h;
        b.hi(j) = std::max(std::ceil(b.hi(j) / h) * h, b.lo(j) + h);
      }
      snapped_ = true;
    }
  }
  std::sort(boxes_.begin(), boxes_.end(), lex_less);
  boxes_.erase(std::unique(boxes_.begin(), boxes_.end()), boxes_.end());
  if (c == 1) {
    merge_along(boxes_, 0);
    return;
  }
  std::size_t before;
  do {
    before = boxes_.size();
    for (int j = 0; j < c; ++j) merge_along(boxes_, j);
  } while (boxes_.size() < before);
  if (boxes_.size() <= 3000) {
    std::vector<Box> kept;
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < boxes_.size() && !covered; ++j)
        covered = j != i && boxes_[i].inside_closed(boxes_[j]) && (!(boxes_[i] == boxes_[j]) || j < i);
      if (!covered) kept.push_back(boxes_[i]);
    }
    boxes_ = std::move(kept);
  }
  std::sort(boxes_.begin(), boxes_.end(), lex_less);
}

Box BoxSet::hull() const {
  if (boxes_.empty()) throw std::logic_error("hull of empty BoxSet");
  Box h = boxes_.front();
  for (const auto& b : boxes_) h = h.hull(b);
  return h;
}

BoxSet BoxSet::unite(const BoxSet& o) const {
  auto all = boxes_;
  all.insert(all.end(), o.boxes_.begin(), o.boxes_.end());
  return {all, std::max(resolution_, o.resolution_)};
}

BoxSet BoxSet::intersect(const BoxSet& o) const {
  std::vector<Box> out;
  for (const auto& a : boxes_)
    for (const auto& b : o.boxes_)
      if (auto i = a.intersect(b)) out.push_back(*i);
  return {out, std::max(resolution_, o.resolution_)};
}

BoxSet BoxSet::inflated(double r) const {
  std::vector<Box> out;
  for (const auto& b : boxes_) out.push_back(b.inflated(r));
  return {out, resolution_};
}

double BoxSet::distance_to(const Vec& x) const { return Index(boxes_).distance(x); }

bool BoxSet::contains(const Vec& x, double tol) const {
  for (const auto& b : boxes_)
    if (b.contains_closed(x, tol)) return true;
  return false;
}

std::string BoxSet::to_csv() const {
  std::string out;
  for (const auto& b : boxes_) {
    for (int j = 0; j < b.dim(); ++j) {
      if (j) out += ',';
      out += fmt_num(b.lo(j)) + "," + fmt_num(b.hi(j));
    }
    out += '\n';
  }
  return out;
}

BoxSet BoxSet::from_csv(const std::string& text, int resolution) {
  std::vector<Box> boxes;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> xs;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) xs.push_back(std::stod(cell));
    if (xs.size() % 2 || xs.empty()) throw std::invalid_argument("CSV row needs lo,hi pairs: " + line);
    const int c = static_cast<int>(xs.size() / 2);
    Vec lo(c), hi(c);
    for (int j = 0; j < c; ++j) {
      lo(j) = xs[2 * static_cast<std::size_t>(j)];
      hi(j) = xs[2 * static_cast<std::size_t>(j) + 1];
    }
    boxes.emplace_back(lo, hi);
  }
  return {boxes, resolution};
}

double directed_hausdorff(const BoxSet& A, const BoxSet& B) {
  if (A.empty()) return 0;
  if (B.empty()) return std::numeric_limits<double>::infinity();
  if (A.dim() != B.dim()) throw std::invalid_argument("hausdorff: dimension mismatch");
  const Index index(B.boxes());
  const double eps = std::ldexp(1.0, -(std::max(A.resolution(), B.resolution()) + 6));
  double M = 0;
  std::vector<Box> stack(A.boxes().rbegin(), A.boxes().rend());
  while (!stack.empty()) {
    Box p = stack.back();
    stack.pop_back();
    const Vec c = p.center();
    const double half = p.max_side() / 2;
    const double d0 = index.distance(c);
    M = std::max(M, d0);
    double ub = d0 + half;
    if (ub <= M + eps) continue;
    index.within(c, d0 + half, [&](const Box& b) { ub = std::min(ub, p.max_distance_within(b)); });
    if (ub <= M + eps) continue;
    for (auto& q : p.split_longest()) stack.push_back(q);
  }
  return M;
}

double hausdorff(const BoxSet& A, const BoxSet& B) {
  return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

}  // namespace symblend
