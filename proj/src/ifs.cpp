#include "symblend/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <map>
#include <set>

#include "symblend/rng.hpp"

namespace symblend {

namespace {

using CellKey = std::array<long long, 3>;

CellKey cell_of(const Vec& x, double h) {
  CellKey k{0, 0, 0};
  for (int j = 0; j < x.size(); ++j) k[static_cast<std::size_t>(j)] = std::llround(x(j) / h);
  return k;
}

std::vector<Box> cells_of(const Box& B, double h) {
  std::vector<Box> out;
  const int c = B.dim();
  std::vector<long long> n(static_cast<std::size_t>(c));
  for (int j = 0; j < c; ++j) n[static_cast<std::size_t>(j)] = std::max(1LL, static_cast<long long>(std::ceil(B.sides()(j) / h - 1e-9)));
  std::vector<long long> idx(static_cast<std::size_t>(c), 0);
  while (true) {
    Vec lo(c), hi(c);
    for (int j = 0; j < c; ++j) {
      auto u = static_cast<std::size_t>(j);
      double step = B.sides()(j) / static_cast<double>(n[u]);
      lo(j) = B.lo(j) + step * static_cast<double>(idx[u]);
      hi(j) = idx[u] + 1 == n[u] ? B.hi(j) : lo(j) + step;
    }
    out.emplace_back(lo, hi);
    int j = 0;
    while (j < c && ++idx[static_cast<std::size_t>(j)] == n[static_cast<std::size_t>(j)]) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == c) break;
  }
  return out;
}

}  // namespace

IFS IFS::of(const SkewProduct& s) { return {s.one_step_maps(), s.D()}; }

IFS IFS::inverse() const {
  IFS out{{}, D};
  for (const auto& m : maps) out.maps.push_back(m.inverse());
  return out;
}

double IFS::beta() const {
  double b = 0;
  for (const auto& m : maps) b = std::max(b, m.lipschitz(D).second);
  return b;
}

double IFS::lambda() const {
  double l = std::numeric_limits<double>::infinity();
  for (const auto& m : maps) l = std::min(l, m.lipschitz(D).first);
  return l;
}

bool IFS::certified() const {
  return std::all_of(maps.begin(), maps.end(), [](const FiberMap& m) { return m.certified(); });
}

OrbitResult orbit(const IFS& ifs, const Vec& x, int max_length, std::size_t max_points, int resolution) {
  const double h = std::ldexp(1.0, -resolution);
  OrbitResult res;
  std::set<CellKey> seen;
  std::vector<Vec> frontier{x};
  for (int len = 1; len <= max_length && !frontier.empty() && !res.truncated; ++len) {
    std::vector<Vec> next;
    for (const auto& p : frontier) {
      for (const auto& m : ifs.maps) {
        Vec y = m(p);
        ++res.compositions;
        if (!seen.insert(cell_of(y, h)).second) continue;
        res.points.push_back(y);
        next.push_back(y);
        if (res.points.size() >= max_points) {
          res.truncated = true;
          break;
        }
      }
      if (res.truncated) break;
    }
    frontier = std::move(next);
  }
  return res;
}

BoxSet hutchinson_step(const IFS& ifs, const BoxSet& A) {
  std::vector<Box> out;
  out.reserve(A.size() * ifs.maps.size());
  for (const auto& m : ifs.maps)
    for (const auto& b : A.boxes()) out.push_back(m.image(b));
  return {std::move(out), A.resolution()};
}

AttractorResult hutchinson_attractor(const IFS& ifs, double tol, int resolution, int max_iterations) {
  const double beta = ifs.beta();
  if (!(beta < 1)) throw std::invalid_argument("hutchinson_attractor: IFS is not contracting (beta >= 1)");
  if (!(tol > 0)) throw std::invalid_argument("hutchinson_attractor: tol must be positive");
  AttractorResult res;
  BoxSet A = BoxSet::single(ifs.D, resolution);
  const double target = tol * (1 - beta) / beta;
  for (int it = 1; it <= max_iterations; ++it) {
    BoxSet next = hutchinson_step(ifs, A);
    double d = hausdorff(A, next);
    res.iterations = it;
    res.last_step = d;
    A = std::move(next);
    if (d <= target) break;
  }
  res.error_bound = beta * res.last_step / (1 - beta) + (A.snapped() ? A.cell() : 0.0);
  res.set = std::move(A);
  return res;
}

double covering_margin(const std::vector<Box>& members, const Box& X, int resolution) {
  const double h = std::ldexp(1.0, -resolution);
  auto cell_lower = [&](const Box& p) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : members) best = std::max(best, p.depth_in(m));
    return best;
  };
  auto point_value = [&](const Vec& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : members) best = std::max(best, m.point_depth(x));
    return best;
  };
  double upper = point_value(X.center());
  double lower = std::numeric_limits<double>::infinity();
  std::vector<Box> stack{X};
  while (!stack.empty()) {
    Box p = stack.back();
    stack.pop_back();
    double lo = cell_lower(p);
    upper = std::min(upper, point_value(p.center()));
    if (lo >= upper || p.max_side() <= h) {
      lower = std::min(lower, lo);
      continue;
    }
    auto parts = p.split_longest();
    stack.push_back(parts[1]);
    stack.push_back(parts[0]);
  }
  return lower;
}

double lebesgue_lower_bound(const std::vector<Box>& cover, const Box& X, int resolution) {
  const double h = std::ldexp(1.0, -resolution);
  const double inf = std::numeric_limits<double>::infinity();
  // Sets of diameter < L with lower corner in P fit in a member m once m.lo < P.lo and L ≤ m.hi − P.hi
  // on every axis where m does not already reach past X.
  auto value = [&](const Box& P) {
    double best = -inf;
    for (const auto& m : cover) {
      if (!(m.lo.array() < P.lo.array()).all()) continue;
      double v = inf;
      for (int j = 0; j < X.dim(); ++j)
        if (m.hi(j) <= X.hi(j)) v = std::min(v, m.hi(j) - P.hi(j));
      best = std::max(best, v);
    }
    return best;
  };
  double upper = value(Box{X.center(), X.center()});
  double lower = inf;
  std::vector<Box> stack{X};
  while (!stack.empty()) {
    Box p = stack.back();
    stack.pop_back();
    double lo = value(p);
    upper = std::min(upper, value(Box{p.center(), p.center()}));
    if (lo >= upper || p.max_side() <= h) {
      lower = std::min(lower, lo);
      continue;
    }
    auto parts = p.split_longest();
    stack.push_back(parts[1]);
    stack.push_back(parts[0]);
  }
  if (lower == inf) {
    double depth = -inf;
    for (const auto& m : cover) depth = std::max(depth, X.depth_in(m));
    lower = X.max_side() + std::max(depth, 0.0);
  }
  if (!(lower > 0)) throw std::invalid_argument("lebesgue_lower_bound: the members do not cover X");
  return lower;
}

CoveringCertificate covering_check_members(const std::vector<Box>& members, const Box& B, int resolution, bool certified_path) {
  CoveringCertificate cert;
  cert.B = B;
  cert.images = members;
  cert.resolution = resolution;
  cert.certified_path = certified_path;
  auto res = certify_inside_union(B, members, resolution);
  cert.status = res.status;
  cert.witness = res.witness;
  cert.margin = covering_margin(members, B, resolution);
  if (cert.status == Containment::Certified) {
    if (cert.margin > 0) cert.lebesgue_lower_bound = lebesgue_lower_bound(members, B, resolution);
    else cert.status = Containment::Unknown;
  }
  return cert;
}

CoveringCertificate covering_check(const IFS& ifs, const Box& B, int resolution, bool inverse) {
  std::vector<Box> images;
  for (const auto& m : ifs.maps) images.push_back(inverse ? m.preimage(B) : m.image(B));
  auto cert = covering_check_members(images, B, resolution, ifs.certified());
  cert.inverse = inverse;
  return cert;
}

Json CoveringCertificate::to_json() const {
  Json j;
  j["B"] = symblend::to_json(B);
  Json imgs = Json::array();
  for (const auto& b : images) imgs.push_back(symblend::to_json(b));
  j["images"] = imgs;
  j["inverse"] = inverse;
  j["status"] = to_string(status);
  j["verified"] = verified();
  j["certified_path"] = certified_path;
  j["margin"] = bound(margin);
  j["lebesgue_lower_bound"] = bound(lebesgue_lower_bound);
  j["resolution"] = resolution;
  if (witness) j["witness"] = symblend::to_json(*witness);
  return j;
}

TranslationFamily translation_family(const FiberMap& phi, const Box& seed, double nu, double alpha, int resolution) {
  auto [lam, beta] = phi.lipschitz(seed);
  if (!(beta < 1)) throw std::invalid_argument("translation_family: map is not contracting on the seed");
  if (!(std::pow(nu, alpha) < lam)) throw std::invalid_argument("translation_family: need nu^alpha < lambda");
  Vec p = seed.center();
  for (int it = 0; it < 100000; ++it) {
    Vec q = phi(p);
    double step = sup_dist(p, q);
    p = q;
    if (step < 1e-15) break;
  }
  if (!seed.contains_open(p)) throw std::invalid_argument("translation_family: no fixed point inside the seed");
  const int c = seed.dim();
  double radius = std::min((p - seed.lo).minCoeff(), (seed.hi - p).minCoeff());
  const double s = 2 * radius;
  std::vector<int> n(static_cast<std::size_t>(c));
  std::vector<double> sigma(static_cast<std::size_t>(c));
  for (int j = 0; j < c; ++j) {
    double slope = phi.kind() == MapKind::Affine ? std::abs(phi.a()(j)) : lam;
    double need = std::max(1 / slope, 1 / (1 - beta));
    int nj = static_cast<int>(std::floor(need)) + 1;
    if (nj % 2 == 0) ++nj;
    n[static_cast<std::size_t>(j)] = nj;
    sigma[static_cast<std::size_t>(j)] = s / nj;
  }
  TranslationFamily fam;
  fam.fixed_point = p;
  fam.B = Box::cube(p, radius);
  std::vector<std::vector<int>> offsets{std::vector<int>(static_cast<std::size_t>(c), 0)};
  std::vector<int> idx(static_cast<std::size_t>(c));
  for (int j = 0; j < c; ++j) idx[static_cast<std::size_t>(j)] = -(n[static_cast<std::size_t>(j)] - 1) / 2;
  while (true) {
    if (std::any_of(idx.begin(), idx.end(), [](int v) { return v != 0; })) offsets.push_back(idx);
    int j = c - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == (n[static_cast<std::size_t>(j)] - 1) / 2) {
      idx[static_cast<std::size_t>(j)] = -(n[static_cast<std::size_t>(j)] - 1) / 2;
      --j;
    }
    if (j < 0) break;
    ++idx[static_cast<std::size_t>(j)];
  }
  double reach = 0;
  for (const auto& o : offsets) {
    Vec t(c);
    for (int j = 0; j < c; ++j) t(j) = o[static_cast<std::size_t>(j)] * sigma[static_cast<std::size_t>(j)];
    reach = std::max(reach, sup_norm(t));
    fam.maps.push_back(phi.translated(t));
  }
  fam.k = static_cast<int>(fam.maps.size());
  fam.D = Box::cube(p, 1.5 * std::max(radius, reach / (1 - beta)) + 1e-3);
  fam.certificate = covering_check(IFS{fam.maps, fam.D}, fam.B, resolution);
  if (!fam.certificate.verified()) throw std::logic_error("translation_family: constructed family failed its covering check");
  return fam;
}

Json BlendingReport::to_json() const {
  Json j;
  j["B"] = symblend::to_json(B);
  j["budget"] = budget;
  j["samples"] = samples;
  j["resolution"] = resolution;
  j["covered_samples"] = covered_samples;
  j["worst_gap"] = measured(worst_gap);
  if (worst_cell) j["worst_cell"] = symblend::to_json(*worst_cell);
  j["resolution_limited"] = resolution_limited;
  j["covering_certified"] = covering_certified;
  j["passed"] = passed();
  return j;
}

BlendingReport blending_region_check(const SkewProduct& one_step, const Box& B, double budget, int samples,
                                     std::uint64_t seed, int resolution, int max_length) {
  if (one_step.depth() != 0 || !one_step.contracting())
    throw std::invalid_argument("blending_region_check: needs a contracting one-step skew product");
  BlendingReport rep;
  rep.B = B;
  rep.budget = budget;
  rep.samples = samples;
  rep.resolution = resolution;
  rep.covering_certified = covering_check(IFS::of(one_step), B, 10).verified();
  const double h = std::ldexp(1.0, -resolution);
  const auto cells = cells_of(B, h);
  Rng rng(seed);
  std::size_t cap = 1;
  for (int j = 0; j < one_step.dim(); ++j) cap *= static_cast<std::size_t>(std::ceil(one_step.D().sides()(j) / h) + 2);
  cap *= 4;
  for (int s = 0; s < samples; ++s) {
    SkewProduct psi = random_translation(one_step, budget, rng);
    Vec x(B.dim());
    for (int j = 0; j < B.dim(); ++j) x(j) = rng.uniform(B.lo(j), B.hi(j));
    auto orb = orbit(IFS::of(psi), x, max_length, cap, resolution + 1);
    rep.resolution_limited = rep.resolution_limited || orb.truncated;
    std::map<CellKey, std::vector<Vec>> grid;
    for (const auto& p : orb.points) grid[cell_of(p, h)].push_back(p);
    double worst = 0;
    std::optional<Vec> worst_at;
    for (const auto& cell : cells) {
      Vec ctr = cell.center();
      CellKey k = cell_of(ctr, h);
      double best = std::numeric_limits<double>::infinity();
      const int c = B.dim();
      for (int mask = 0; mask < static_cast<int>(std::pow(3, c)); ++mask) {
        CellKey q = k;
        int m = mask;
        for (int j = 0; j < c; ++j) {
          q[static_cast<std::size_t>(j)] += m % 3 - 1;
          m /= 3;
        }
        auto it = grid.find(q);
        if (it == grid.end()) continue;
        for (const auto& p : it->second) best = std::min(best, sup_dist(p, ctr));
      }
      if (best == std::numeric_limits<double>::infinity())
        for (const auto& p : orb.points) best = std::min(best, sup_dist(p, ctr));
      if (best > worst) {
        worst = best;
        worst_at = ctr;
      }
    }
    if (worst <= h) ++rep.covered_samples;
    if (worst > rep.worst_gap) {
      rep.worst_gap = worst;
      rep.worst_cell = worst_at;
    }
  }
  if (rep.worst_gap <= h) rep.worst_cell.reset();
  return rep;
}

}  // namespace symblend
