#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symblend/fiber.hpp"
#include "symblend/geometry.hpp"
#include "symblend/io.hpp"

namespace symblend {

struct IFS {
  std::vector<FiberMap> maps;
  Box D;

  static IFS of(const SkewProduct& one_step);
  IFS inverse() const;
  double beta() const;
  double lambda() const;
  bool certified() const;
};

struct OrbitResult {
  std::vector<Vec> points;        // distinct at the requested resolution
  std::size_t compositions = 0;   // composition evaluations performed
  bool truncated = false;         // max_points reached
};

OrbitResult orbit(const IFS& ifs, const Vec& x, int max_length, std::size_t max_points, int resolution = 10);

BoxSet hutchinson_step(const IFS& ifs, const BoxSet& A);

struct AttractorResult {
  BoxSet set;
  int iterations = 0;
  double last_step = 0;     // d_H between the last two iterates
  double error_bound = 0;   // bound on d_H(set, K)
};

AttractorResult hutchinson_attractor(const IFS& ifs, double tol, int resolution = 10, int max_iterations = 100000);

struct CoveringCertificate {
  Box B;
  std::vector<Box> images;
  double margin = 0;
  double lebesgue_lower_bound = 0;
  int resolution = 10;
  Containment status = Containment::Unknown;
  bool certified_path = true;  // false when some map only has declared bounds
  bool inverse = false;
  std::optional<Vec> witness;

  bool verified() const { return status == Containment::Certified && margin > 0; }
  Json to_json() const;
};

// B̄ ⊂ φ_1(B) ∪ ⋯ ∪ φ_k(B), or with the inverses when `inverse` is set.
CoveringCertificate covering_check(const IFS& ifs, const Box& B, int resolution = 10, bool inverse = false);
CoveringCertificate covering_check_members(const std::vector<Box>& members, const Box& B, int resolution, bool certified_path = true);

// min over points of X of the largest depth into some member (negative if uncovered), certified from below.
double covering_margin(const std::vector<Box>& members, const Box& X, int resolution);
double lebesgue_lower_bound(const std::vector<Box>& cover, const Box& X, int resolution = 10);

struct TranslationFamily {
  int k = 0;
  Box B;
  Box D;
  Vec fixed_point;
  std::vector<FiberMap> maps;  // maps[0] is φ itself
  CoveringCertificate certificate;
};

TranslationFamily translation_family(const FiberMap& phi, const Box& seed, double nu = 0.5, double alpha = 1.0, int resolution = 10);

struct BlendingReport {
  Box B;
  double budget = 0;
  int samples = 0;
  int resolution = 8;
  int covered_samples = 0;
  double worst_gap = 0;               // largest distance from a B-cell center to the orbit
  std::optional<Vec> worst_cell;      // center of the worst uncovered cell
  bool resolution_limited = false;    // orbit enumeration hit its point cap
  bool covering_certified = false;    // covering_check on the nominal maps
  bool passed() const { return covered_samples == samples; }
  Json to_json() const;
};

BlendingReport blending_region_check(const SkewProduct& one_step, const Box& B, double budget, int samples,
                                     std::uint64_t seed, int resolution = 8, int max_length = 60);

}  // namespace symblend
