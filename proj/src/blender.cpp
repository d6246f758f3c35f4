#include "symblend/blender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symblend/rng.hpp"

namespace symblend {

namespace {

constexpr int kTiltTerms = 60;

double holder_slack(double v) { return v * (1 + 1e-12) + 1e-15; }

// Smallest lower Lipschitz constant among entries whose central symbol is at most k_used.
double lambda_used(const SkewProduct& psi, int k_used) {
  double lam = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < psi.table().size(); ++c) {
    if (psi.central_word(c)[static_cast<std::size_t>(psi.depth())] > k_used) continue;
    lam = std::min(lam, psi.table()[c].lipschitz(psi.D()).first);
  }
  return lam;
}

double geometric_sum(double r, int n) {
  double s = 0, p = 1;
  for (int j = 0; j < n; ++j, p *= r) s += p;
  return s;
}

std::string describe(const Box& b) { return b.str(); }

}  // namespace

const char* to_string(DiskKind k) {
  switch (k) {
    case DiskKind::Flat: return "flat";
    case DiskKind::Tilted: return "tilted";
    case DiskKind::Random: return "random";
    case DiskKind::Graph: return "graph";
  }
  return "?";
}

HorizontalDisk HorizontalDisk::flat(BiSequence zeta, Vec z, double delta, double alpha, double nu) {
  HorizontalDisk h;
  h.zeta = std::move(zeta);
  h.z = std::move(z);
  h.delta = delta;
  h.alpha = alpha;
  h.nu = nu;
  h.kind = DiskKind::Flat;
  return h;
}

HorizontalDisk HorizontalDisk::tilted(BiSequence zeta, Vec z, double c, std::vector<Vec> eps, double delta, double alpha,
                                      double nu, DiskKind kind) {
  if (eps.empty()) throw std::invalid_argument("tilted disk: need at least one tilt vector");
  for (const auto& e : eps)
    if (e.size() != z.size()) throw std::invalid_argument("tilted disk: tilt vectors must match the fiber dimension");
  HorizontalDisk h = flat(std::move(zeta), std::move(z), delta, alpha, nu);
  h.kind = kind;
  h.c = c;
  h.eps = std::move(eps);
  double spread = 0;
  for (const auto& a : h.eps)
    for (const auto& b : h.eps) spread = std::max(spread, sup_dist(a, b));
  h.C = std::abs(c) * spread / (1 - std::pow(nu, alpha));
  return h;
}

HorizontalDisk HorizontalDisk::graph(BiSequence zeta, Vec z, std::function<Vec(const BiSequence&)> fn, double C,
                                     double delta, double alpha, double nu) {
  HorizontalDisk h = flat(std::move(zeta), std::move(z), delta, alpha, nu);
  h.kind = DiskKind::Graph;
  h.fn = std::move(fn);
  h.C = C;
  return h;
}

Vec HorizontalDisk::operator()(const BiSequence& xi) const {
  switch (kind) {
    case DiskKind::Flat: return z;
    case DiskKind::Graph: return fn(xi);
    default: break;
  }
  Vec out = z;
  const double na = std::pow(nu, alpha);
  double w = c;
  const long n = static_cast<long>(eps.size());
  for (long j = 1; j <= kTiltTerms; ++j) {
    w *= na;
    out += w * eps[static_cast<std::size_t>((xi[-j] - 1) % n)];
  }
  return out;
}

Json HorizontalDisk::to_json() const {
  Json j;
  j["kind"] = symblend::to_string(kind);
  j["zeta"] = zeta.str();
  j["z"] = symblend::to_json(z);
  j["alpha"] = alpha;
  j["nu"] = nu;
  j["C"] = C;
  j["delta"] = delta;
  if (kind == DiskKind::Tilted || kind == DiskKind::Random) {
    j["c"] = c;
    Json e = Json::array();
    for (const auto& v : eps) e.push_back(symblend::to_json(v));
    j["eps"] = e;
  }
  return j;
}

HorizontalDisk HorizontalDisk::from_json(const Json& j, int dim) {
  const std::string where = "disk";
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::string kind = j.value("kind", std::string("flat"));
  BiSequence zeta;
  try {
    zeta = BiSequence::parse(field(j, "zeta", where).get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + ".zeta: expected a string");
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ".zeta: " + e.what());
  }
  Vec z = vec_from_json(field(j, "z", where), where + ".z");
  if (z.size() != dim) throw ParseError(where + ".z: dimension " + std::to_string(z.size()) + " does not match the fiber dimension " + std::to_string(dim));
  auto number = [&](const char* name, double dflt, bool required) {
    if (!j.contains(name)) {
      if (required) throw ParseError(where + "." + name + ": missing");
      return dflt;
    }
    if (!j[name].is_number()) throw ParseError(where + "." + name + ": expected a number");
    return j[name].get<double>();
  };
  double alpha = number("alpha", 1.0, false), nu = number("nu", 0.5, false), delta = number("delta", 0, true);
  if (kind == "flat") {
    if (number("C", 0, false) != 0) throw ParseError(where + ".C: a flat disk has C = 0");
    return flat(zeta, z, delta, alpha, nu);
  }
  if (kind == "tilted" || kind == "random") {
    double c = number("c", 0, true);
    const Json& e = field(j, "eps", where);
    if (!e.is_array() || e.empty()) throw ParseError(where + ".eps: expected a non-empty array");
    std::vector<Vec> eps;
    for (std::size_t i = 0; i < e.size(); ++i) {
      eps.push_back(vec_from_json(e[i], where + ".eps[" + std::to_string(i) + "]"));
      if (eps.back().size() != dim) throw ParseError(where + ".eps[" + std::to_string(i) + "]: wrong dimension");
    }
    auto h = tilted(zeta, z, c, eps, delta, alpha, nu, kind == "tilted" ? DiskKind::Tilted : DiskKind::Random);
    if (j.contains("C") && std::abs(number("C", 0, false) - h.C) > 1e-12 * (1 + h.C))
      throw ParseError(where + ".C: does not match the constant implied by c and eps (" + fmt_num(h.C) + ")");
    return h;
  }
  throw ParseError(where + ".kind: unknown disk kind '" + kind + "' (flat, tilted, random)");
}

DiskValidation validate_disk(const HorizontalDisk& H, const Box& B, int k, int samples, Rng& rng) {
  DiskValidation v;
  const double na = std::pow(H.nu, H.alpha);
  auto fail = [&](std::string why) {
    v.valid = false;
    v.reason = std::move(why);
    return v;
  };
  if (!(H.delta > 0)) return fail("delta must be positive");
  if (H.z.size() != B.dim()) return fail("disk dimension does not match B");
  if (!B.contains_open(H.z)) return fail("center z = " + fmt_num(H.z(0)) + (H.z.size() > 1 ? ",..." : "") + " is not in B");
  if (H.C > 0 && !(H.C * na < H.delta)) return fail("C nu^alpha = " + fmt_num(H.C * na) + " is not below delta = " + fmt_num(H.delta));
  if (H.kind == DiskKind::Tilted || H.kind == DiskKind::Random) {
    double m = 0;
    for (const auto& e : H.eps) m = std::max(m, sup_norm(e));
    double off = std::abs(H.c) * m * na / (1 - na);
    if (!(off < H.delta)) return fail("tilt offset bound " + fmt_num(off) + " is not below delta");
  }
  v.min_depth_in_B = B.point_depth(H.z);
  BiSequence prev = H.zeta;
  Vec hprev = H(prev);
  for (int s = 0; s < samples; ++s) {
    BiSequence xi = H.zeta.with_past_word(rng.word(k, rng.integer(1, 12)));
    Vec h = H(xi);
    v.max_offset = std::max(v.max_offset, sup_dist(H.z, h));
    v.min_depth_in_B = std::min(v.min_depth_in_B, B.point_depth(h));
    if (auto l = first_disagreement(xi, prev)) {
      double q = sup_dist(h, hprev) / std::pow(metric(xi, prev, H.nu), H.alpha);
      v.measured_holder = std::max(v.measured_holder, q);
    }
    prev = xi;
    hprev = h;
  }
  if (!(v.max_offset < H.delta)) return fail("sampled offset " + fmt_num(v.max_offset) + " is not below delta");
  if (!(v.min_depth_in_B > 0)) return fail("disk leaves B");
  if (v.measured_holder > holder_slack(H.C)) return fail("measured Holder quotient " + fmt_num(v.measured_holder) + " exceeds C");
  v.valid = true;
  return v;
}

std::vector<Box> blender_members(const SkewProduct& psi, const Box& B, double budget, int k_used) {
  if (k_used <= 0) k_used = psi.k();
  std::vector<std::optional<Box>> acc(static_cast<std::size_t>(k_used));
  for (std::size_t c = 0; c < psi.table().size(); ++c) {
    int i = psi.central_word(c)[static_cast<std::size_t>(psi.depth())];
    if (i > k_used) continue;
    Box img = psi.table()[c].image(B);
    auto& a = acc[static_cast<std::size_t>(i - 1)];
    if (!a) a = img;
    else if (auto cut = a->intersect(img)) a = *cut;
    else a = Box::cube(img.center(), 0).inflated(-1);
  }
  std::vector<Box> out;
  for (auto& a : acc) out.push_back(a->inflated(-budget));
  return out;
}

IntersectionSetup intersection_setup(const SkewProduct& psi, const Box& B, double budget, int k_used, int resolution) {
  IntersectionSetup s;
  s.B = B;
  s.k_used = k_used > 0 ? k_used : psi.k();
  s.members = blender_members(psi, B, budget, s.k_used);
  auto cert = covering_check_members(s.members, B, resolution, psi.certified());
  s.L = cert.verified() ? cert.lebesgue_lower_bound : 0;
  return s;
}

std::vector<Vec> backward_orbit(const SkewProduct& psi, const BiSequence& xi, const Vec& x, int N) {
  std::vector<Vec> pts{x};
  Vec y = x;
  for (long j = 1; j <= N; ++j) {
    y = psi.at(xi, -j).inverse_apply(y);
    pts.push_back(y);
  }
  return pts;
}

double backward_margin(const SkewProduct& psi, const BiSequence& xi, const Vec& x, const Box& B, int N) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : backward_orbit(psi, xi, x, N)) m = std::min(m, B.point_depth(p));
  return m;
}

double backward_divergence_bound(const SkewProduct& psi, int i, double d_alpha) {
  const double na = std::pow(psi.nu(), psi.alpha());
  return psi.holder() * std::pow(na, -i) * geometric_sum(na / psi.lambda(), i) * d_alpha;
}

DivergenceSample measure_backward_divergence(const SkewProduct& psi, const Cylinder& cyl, const Vec& x, int i,
                                             const BiSequence& xi, const BiSequence& zeta) {
  if (!cyl.contains(xi) || !cyl.contains(zeta)) throw std::invalid_argument("backward divergence: sequences are not in the cylinder");
  auto orbit_end = [&](const BiSequence& s) {
    Vec y = x;
    for (long j = 1; j <= i; ++j) {
      y = psi.at(s, -j).inverse_apply(y);
      if (!psi.D().contains_closed(y, 1e-12 * (1 + sup_norm(y)))) throw DomainEscape(j, y);
    }
    return y;
  };
  DivergenceSample s;
  s.measured = sup_dist(orbit_end(xi), orbit_end(zeta));
  s.bound = backward_divergence_bound(psi, i, std::pow(metric(xi, zeta, psi.nu()), psi.alpha()));
  return s;
}

Json IntersectionResult::to_json() const {
  Json j;
  j["success"] = success;
  if (!failure.empty()) j["failure"] = failure;
  if (offending_set) j["offending_set"] = symblend::to_json(*offending_set);
  if (success) {
    j["xi"] = xi.str();
    j["x"] = symblend::to_json(x);
    j["word"] = word_str(word);
    j["min_margin"] = measured(min_margin);
  }
  j["diameter_laws"] = diameter_laws;
  Json st = Json::array();
  for (const auto& d : steps) {
    Json e;
    e["n"] = d.n;
    e["symbol"] = d.symbol;
    e["v_radius"] = bound(d.v_radius);
    e["v_measured"] = measured(d.v_measured);
    e["a_diameter"] = computed(d.a_diameter);
    e["a_pad"] = bound(d.a_pad);
    e["member_margin"] = computed(d.member_margin);
    st.push_back(e);
  }
  j["steps"] = st;
  return j;
}

namespace {

IntersectionResult run_intersection(const SkewProduct& psi, const IntersectionSetup& setup, const HorizontalDisk& H, int N,
                                    std::uint64_t seed, int diameter_samples) {
  IntersectionResult res;
  const int k_used = setup.k_used > 0 ? setup.k_used : psi.k();
  auto fail = [&](std::string why) {
    res.success = false;
    res.failure = std::move(why);
    return res;
  };
  if (N < 0) return fail("precondition: negative depth");
  if (static_cast<int>(setup.members.size()) != k_used) return fail("precondition: expected one member box per usable symbol");
  if (!(setup.L > 0)) return fail("precondition: the member boxes do not certifiably cover B (covering property fails)");
  if (H.alpha != psi.alpha() || H.nu != psi.nu()) return fail("precondition: disk (alpha, nu) differ from the skew product's");
  const double na = std::pow(psi.nu(), psi.alpha());
  const double lam = lambda_used(psi, k_used);
  const double C_psi = psi.holder();
  if (!(na < lam)) return fail("precondition: nu^alpha < lambda fails (lambda = " + fmt_num(lam) + ")");
  const double budget_sum = C_psi / (1 - na / lam);
  if (!(budget_sum < setup.L / 2)) return fail("precondition: Holder budget " + fmt_num(budget_sum) + " is not below L/2 = " + fmt_num(setup.L / 2));
  if (!(H.delta < lam * setup.L / 2)) return fail("precondition: delta = " + fmt_num(H.delta) + " is not below lambda L/2 = " + fmt_num(lam * setup.L / 2));
  Rng rng(seed);
  auto val = validate_disk(H, setup.B, psi.k(), 64, rng);
  if (!val.valid) return fail("precondition: invalid disk: " + val.reason);

  Word outward;  // ω_{−1}, ω_{−2}, …
  BiSequence rep = H.zeta;
  Box V = Box::cube(H.z, H.delta);
  for (int n = 0; n < N; ++n) {
    StepDiagnostic d;
    d.n = n;
    d.v_radius = n == 0 ? H.delta : H.C * std::pow(na, n);
    // Sampled diameter of h over the depth-n relative cylinder around rep.
    {
      Word idx = reversed(outward);
      std::vector<Vec> hv{H(rep)};
      for (int s = 0; s < diameter_samples; ++s) {
        Word w = rng.word(psi.k(), rng.integer(1, 8));
        w.insert(w.end(), idx.begin(), idx.end());
        hv.push_back(H(H.zeta.with_past_word(w)));
      }
      for (std::size_t a = 0; a < hv.size(); ++a)
        for (std::size_t b = a + 1; b < hv.size(); ++b) d.v_measured = std::max(d.v_measured, sup_dist(hv[a], hv[b]));
    }
    if (d.v_measured > holder_slack(H.C * std::pow(na, n))) res.diameter_laws = false;

    Box A = V;
    for (long j = 1; j <= n; ++j) A = psi.at(rep, -j).preimage(A);
    d.a_pad = C_psi * geometric_sum(na / lam, n);
    A = A.inflated(d.a_pad);
    d.a_diameter = A.max_side();
    if (!(d.a_diameter < setup.L)) res.diameter_laws = false;

    int chosen = 0;
    for (int i = 1; i <= k_used; ++i) {
      const Box& m = setup.members[static_cast<std::size_t>(i - 1)];
      if (A.inside_open(m)) {
        chosen = i;
        d.member_margin = A.depth_in(m);
        break;
      }
    }
    if (!chosen) {
      res.steps.push_back(d);
      res.offending_set = A;
      return fail("no member box contains A_" + std::to_string(n) + " = " + describe(A));
    }
    d.symbol = chosen;
    res.steps.push_back(d);
    outward.push_back(chosen);
    rep = H.zeta.with_past_word(reversed(outward));
    Box ball = Box::cube(H(rep), H.C * std::pow(na, n + 1));
    if (auto cut = V.intersect(ball)) V = *cut;
    else V = ball;
  }
  res.word = reversed(outward);
  res.xi = rep;
  res.x = H(rep);
  res.min_margin = backward_margin(psi, res.xi, res.x, setup.B, N);
  res.success = res.min_margin > 0;
  if (!res.success) res.failure = "backward orbit of the output point leaves B";
  return res;
}

}  // namespace

IntersectionResult disk_intersect(const SkewProduct& psi, const IntersectionSetup& setup, const HorizontalDisk& H, int N,
                                  std::uint64_t seed, int diameter_samples) {
  IntersectionSetup s = setup;
  if (s.k_used <= 0) s.k_used = psi.k();
  return run_intersection(psi, s, H, N, seed, diameter_samples);
}

IntersectionResult embedded_disk_intersect(const SkewProduct& psi_hat, int k, const IntersectionSetup& setup,
                                           const HorizontalDisk& H, int N, std::uint64_t seed) {
  if (k < 1 || k > psi_hat.k()) {
    IntersectionResult r;
    r.failure = "precondition: embedded alphabet size outside 1..d";
    return r;
  }
  auto c = psi_hat.constants();
  if (!c.s_domination() || !c.u_domination()) {
    IntersectionResult r;
    r.failure = "precondition: the skew product is not dominated (nu^alpha < lambda, beta < nu^-alpha)";
    return r;
  }
  IntersectionSetup s = setup;
  s.k_used = k;
  return run_intersection(psi_hat, s, H, N, seed, 8);
}

BruteForceResult brute_force_words(const SkewProduct& psi, const Box& B, const HorizontalDisk& H, int N, int k_used) {
  if (k_used <= 0) k_used = psi.k();
  BruteForceResult out;
  for (const auto& w : all_words(k_used, N)) {
    BiSequence xi = H.zeta.with_past_word(w);
    Vec x = H(xi);
    if (!B.contains_open(x)) continue;
    Vec y = x;
    bool ok = true;
    for (long j = 1; j <= N && ok; ++j) {
      y = psi.at(xi, -j).inverse_apply(y);
      ok = B.contains_open(y);
    }
    if (ok) out.admissible.push_back(w);
  }
  return out;
}

HorizontalDisk random_disk(DiskKind kind, const Box& B, int k, int dim, double delta, double alpha, double nu, Rng& rng) {
  BiSequence zeta = rng.sequence(k);
  Vec z(dim);
  for (int j = 0; j < dim; ++j) {
    double lo = B.lo(j) + delta, hi = B.hi(j) - delta;
    z(j) = lo < hi ? rng.uniform(lo, hi) : B.center()(j);
  }
  if (kind == DiskKind::Flat) return HorizontalDisk::flat(zeta, z, delta, alpha, nu);
  std::vector<Vec> eps;
  for (int s = 1; s <= k; ++s) {
    Vec e(dim);
    for (int j = 0; j < dim; ++j) e(j) = kind == DiskKind::Tilted ? (s % 2 ? 1.0 : -1.0) : rng.uniform(-1, 1);
    eps.push_back(e);
  }
  double spread = 0, m = 0;
  for (const auto& a : eps) {
    m = std::max(m, sup_norm(a));
    for (const auto& b : eps) spread = std::max(spread, sup_dist(a, b));
  }
  const double na = std::pow(nu, alpha);
  double frac = kind == DiskKind::Tilted ? 0.45 : rng.uniform(0.05, 0.45);
  double scale = std::max(spread, m);
  double c = scale > 0 ? frac * delta * (1 - na) / (na * scale) : 0;
  return HorizontalDisk::tilted(zeta, z, c, eps, delta, alpha, nu, kind);
}

Json BlenderCertificate::to_json() const {
  Json j;
  j["passed"] = passed;
  j["cu"] = cu;
  if (!failed_stage.empty()) {
    j["failed_stage"] = failed_stage;
    j["reason"] = reason;
  }
  j["lambda"] = computed(lambda);
  j["beta"] = computed(beta);
  j["covering"] = covering.to_json();
  j["shrunk_covering"] = shrunk_covering.to_json();
  j["L"] = bound(L);
  j["delta_max"] = bound(delta_max);
  j["neighbourhood_radius"] = measured(neighbourhood_radius);
  Json bud;
  bud["holder_sum"] = bound(max_budget_sum);
  bud["limit"] = bound(L / 2);
  bud["holds"] = max_budget_sum < L / 2;
  j["holder_budget"] = bud;
  Json ps = Json::array();
  for (const auto& p : perturbations) {
    Json shifts = Json::array();
    for (const auto& v : p) shifts.push_back(symblend::to_json(v));
    ps.push_back(shifts);
  }
  j["perturbations"] = ps;
  Json ts = Json::array();
  for (const auto& t : tested) {
    Json e;
    e["perturbation"] = t.perturbation;
    e["disk"] = t.disk.to_json();
    e["valid"] = t.validation.valid;
    if (!t.validation.valid) e["invalid_reason"] = t.validation.reason;
    e["success"] = t.result.success;
    if (t.result.success) {
      e["xi"] = t.result.xi.str();
      e["x"] = symblend::to_json(t.result.x);
      e["word"] = word_str(t.result.word);
      e["min_margin"] = measured(t.result.min_margin);
    } else {
      e["failure"] = t.result.failure;
    }
    e["diameter_laws"] = t.result.diameter_laws;
    ts.push_back(e);
  }
  j["tested"] = ts;
  return j;
}

BlenderCertificate certify_blender(const SkewProduct& phi, const Box& B, const BlenderConfig& cfg) {
  BlenderCertificate cert;
  cert.lambda = phi.lambda();
  cert.beta = phi.beta();
  auto withhold = [&](const char* stage, std::string why) {
    cert.passed = false;
    cert.failed_stage = stage;
    cert.reason = std::move(why);
    return cert;
  };
  const double na = std::pow(phi.nu(), phi.alpha());
  if (phi.depth() != 0) return withhold("preconditions", "certification needs a one-step skew product");
  if (phi.dim() != B.dim()) return withhold("preconditions", "B has the wrong dimension");
  if (!(na < cert.lambda && cert.lambda <= cert.beta && cert.beta < 1))
    return withhold("preconditions", "needs nu^alpha < lambda <= beta < 1 (lambda = " + fmt_num(cert.lambda) + ", beta = " + fmt_num(cert.beta) + ")");
  if (!(cfg.budget >= 0) || cfg.depth < 1 || !(cfg.safety > 0 && cfg.safety < 1))
    return withhold("preconditions", "needs budget >= 0, depth >= 1 and safety in (0,1)");

  cert.covering = covering_check(IFS::of(phi), B, cfg.resolution);
  if (!cert.covering.verified()) return withhold("covering", "covering property not certified");

  IntersectionSetup setup;
  setup.B = B;
  setup.k_used = phi.k();
  setup.members = blender_members(phi, B, cfg.budget);
  cert.shrunk_covering = covering_check_members(setup.members, B, cfg.resolution, phi.certified());
  if (!cert.shrunk_covering.verified()) return withhold("shrunk covering", "member boxes deflated by the budget no longer cover B");
  cert.L = setup.L = cert.shrunk_covering.lebesgue_lower_bound;
  cert.delta_max = cert.lambda * cert.L / 2 * (1 - cfg.safety);

  Rng rng(cfg.seed);
  std::vector<SkewProduct> systems{phi};
  cert.perturbations.push_back(std::vector<Vec>(phi.table().size(), vec_fill(phi.dim(), 0.0)));
  for (int p = 0; p < cfg.perturbations; ++p) {
    std::vector<Vec> shifts;
    for (std::size_t c = 0; c < phi.table().size(); ++c) {
      Vec s(phi.dim());
      for (int j = 0; j < phi.dim(); ++j) s(j) = rng.uniform(-cfg.budget, cfg.budget);
      shifts.push_back(s);
    }
    systems.push_back(translate_entries(phi, shifts));
    cert.perturbations.push_back(std::move(shifts));
  }

  bool all = true;
  std::string first_failure;
  for (std::size_t p = 0; p < systems.size(); ++p) {
    const SkewProduct& psi = systems[p];
    cert.neighbourhood_radius = std::max(cert.neighbourhood_radius, skew_distance(phi, psi));
    cert.max_budget_sum = std::max(cert.max_budget_sum, psi.holder() / (1 - na / psi.lambda()));
    std::vector<HorizontalDisk> battery;
    battery.push_back(random_disk(DiskKind::Flat, B, phi.k(), phi.dim(), cert.delta_max, phi.alpha(), phi.nu(), rng));
    battery.push_back(random_disk(DiskKind::Tilted, B, phi.k(), phi.dim(), cert.delta_max, phi.alpha(), phi.nu(), rng));
    for (int d = 0; d < cfg.disks; ++d) {
      double delta = rng.uniform(0.5, 1.0) * cert.delta_max;
      battery.push_back(random_disk(DiskKind::Random, B, phi.k(), phi.dim(), delta, phi.alpha(), phi.nu(), rng));
    }
    for (auto& H : battery) {
      TestedDisk t;
      t.perturbation = static_cast<int>(p);
      t.validation = validate_disk(H, B, phi.k(), 64, rng);
      t.result = disk_intersect(psi, setup, H, cfg.depth, rng.next());
      t.disk = std::move(H);
      bool ok = t.validation.valid && t.result.success && t.result.diameter_laws && t.result.min_margin > 0;
      if (!ok && first_failure.empty())
        first_failure = "perturbation " + std::to_string(p) + ", " + to_string(t.disk.kind) + " disk: " +
                        (t.validation.valid ? (t.result.success ? std::string("diameter law violated") : t.result.failure) : t.validation.reason);
      all = all && ok;
      cert.tested.push_back(std::move(t));
    }
  }
  if (!(cert.max_budget_sum < cert.L / 2)) return withhold("holder budget", "Holder budget is not below L/2");
  if (!all) return withhold("disk battery", first_failure);
  cert.passed = true;
  return cert;
}

BlenderCertificate certify_cu_blender(const SkewProduct& phi, const Box& B, const BlenderConfig& cfg) {
  if (!phi.expanding()) {
    BlenderCertificate cert;
    cert.cu = true;
    cert.lambda = phi.lambda();
    cert.beta = phi.beta();
    cert.failed_stage = "preconditions";
    cert.reason = "a cu-blender needs fiber-expanding maps (lambda > 1)";
    return cert;
  }
  auto cert = certify_blender(inverse_skew_product(phi), B, cfg);
  cert.cu = true;
  return cert;
}

}  // namespace symblend
