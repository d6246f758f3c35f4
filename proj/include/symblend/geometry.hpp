#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace symblend {

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline double sup_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline double sup_dist(const Vec& a, const Vec& b) { return sup_norm(a - b); }
Vec vec(std::initializer_list<double> xs);
Vec vec_fill(int dim, double v);
std::string fmt_num(double x);  // shortest exact decimal (%.17g)

struct Box {
  Vec lo, hi;

  Box() = default;
  Box(Vec l, Vec h);
  static Box cube(const Vec& center, double radius);
  static Box interval(double l, double h) { return {vec({l}), vec({h})}; }

  int dim() const { return static_cast<int>(lo.size()); }
  Vec center() const { return (lo + hi) / 2; }
  Vec sides() const { return hi - lo; }
  double max_side() const { return sup_norm(hi - lo); }
  double min_side() const { return (hi - lo).minCoeff(); }
  bool empty() const;

  bool contains_closed(const Vec& x, double tol = 0.0) const;
  bool contains_open(const Vec& x) const;
  bool inside_open(const Box& outer) const;    // this ⊂ int(outer)
  bool inside_closed(const Box& outer) const;  // this ⊆ outer
  // Largest r with the r-neighbourhood (sup norm) of this box inside outer; negative when not contained.
  double depth_in(const Box& outer) const;
  double point_depth(const Vec& x) const;  // signed distance of x from the complement
  double distance_to(const Vec& x) const;  // 0 inside
  double max_distance_within(const Box& b) const;  // sup_{y ∈ this} dist(y, b)

  Box inflated(double r) const;
  Box hull(const Box& o) const;
  std::optional<Box> intersect(const Box& o) const;
  std::vector<Box> split_longest() const;
  std::vector<Vec> vertices() const;

  bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
  std::string str() const;
};

enum class Containment { Certified, Refuted, Unknown };
const char* to_string(Containment c);

struct ContainmentResult {
  Containment status = Containment::Unknown;
  std::optional<Vec> witness;  // point of the box in no member (Refuted) or unresolved cell center (Unknown)
};

// Certify box ⊆ union of open members by subdivision down to cells of side 2^{-resolution}.
ContainmentResult certify_inside_union(const Box& box, const std::vector<Box>& members, int resolution);

class BoxSet {
 public:
  BoxSet() = default;
  BoxSet(std::vector<Box> boxes, int resolution, bool normalize = true);
  static BoxSet single(const Box& b, int resolution) { return BoxSet({b}, resolution); }

  const std::vector<Box>& boxes() const { return boxes_; }
  int resolution() const { return resolution_; }
  double cell() const;
  int dim() const { return boxes_.empty() ? 0 : boxes_.front().dim(); }
  bool empty() const { return boxes_.empty(); }
  std::size_t size() const { return boxes_.size(); }
  // True when normalization snapped small boxes to resolution cells (adds at most one cell of error).
  bool snapped() const { return snapped_; }
  Box hull() const;

  BoxSet unite(const BoxSet& o) const;
  BoxSet intersect(const BoxSet& o) const;
  BoxSet inflated(double r) const;

  double distance_to(const Vec& x) const;
  bool contains(const Vec& x, double tol = 0.0) const;

  std::string to_csv() const;
  static BoxSet from_csv(const std::string& text, int resolution);

 private:
  void normalize();
  std::vector<Box> boxes_;
  int resolution_ = 10;
  bool snapped_ = false;
};

// sup_{a ∈ A} dist(a, B), accurate to 2^{-(r+6)} where r is the finer resolution.
double directed_hausdorff(const BoxSet& A, const BoxSet& B);
double hausdorff(const BoxSet& A, const BoxSet& B);

}  // namespace symblend
