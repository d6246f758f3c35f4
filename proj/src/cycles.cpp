#include "symblend/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symblend/lamination.hpp"
#include "symblend/rng.hpp"

namespace symblend {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<double, double> lipschitz_range(const std::vector<FiberMap>& maps, std::size_t count, const Box& D) {
  double lo = kInf, hi = 0;
  for (std::size_t i = 0; i < count; ++i) {
    auto [l, h] = maps[i].lipschitz(D);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

std::vector<FiberMap> head(const std::vector<FiberMap>& maps, int k) {
  return {maps.begin(), maps.begin() + k};
}

Vec iterate(const FiberMap& f, Vec x, int n) {
  for (int i = 0; i < n; ++i) x = f(x);
  return x;
}

Json leg_one(const CycleScenario& s, const std::vector<FiberMap>& maps, int N, Rng& rng, bool& ok) {
  const int k = s.k;
  Word fut(static_cast<std::size_t>(s.m + 1), k + 2);
  Word tail = rng.word(k, N);
  fut.insert(fut.end(), tail.begin(), tail.end());
  BiSequence xi(rng.word(k, N), {1}, fut, {1});
  auto hat = SkewProduct::one_step(maps, s.window, s.alpha, s.nu);

  std::vector<Vec> orbit{s.y};
  for (int j = 0; j < s.m + N; ++j) orbit.push_back(hat.at(xi, j)(orbit.back()));
  const double at_m = s.B_cs.point_depth(orbit[static_cast<std::size_t>(s.m)]);
  double in_cs = kInf;
  for (std::size_t j = static_cast<std::size_t>(s.m); j < orbit.size(); ++j) in_cs = std::min(in_cs, s.D_cs.point_depth(orbit[j]));

  // Distance to the cs invariant graph; the past of τ^jξ only uses maps that keep D_cs.
  std::vector<FiberMap> used = head(maps, k);
  used.push_back(maps[static_cast<std::size_t>(k + 1)]);
  const double rate = lipschitz_range(used, used.size(), s.D_cs).second;
  const int G = 60;
  const double err = std::pow(rate, G) * s.D_cs.max_side();
  auto graph = [&](long j) {
    Vec g = s.D_cs.center();
    for (long i = j - G; i < j; ++i) g = hat.at(xi, i)(g);
    return g;
  };
  std::vector<double> dist;
  for (long j = s.m + 1; j <= s.m + N; ++j) dist.push_back(sup_dist(orbit[static_cast<std::size_t>(j)], graph(j)));
  bool rate_ok = rate < 1;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) rate_ok = rate_ok && dist[i + 1] <= rate * dist[i] + 2 * err + 1e-15;

  double in_cu = kInf;
  Vec b = s.y;
  for (long j = 1; j <= N; ++j) {
    b = hat.at(xi, -j).inverse_apply(b);
    in_cu = std::min(in_cu, s.D_cu.point_depth(b));
  }
  ok = at_m > 0 && in_cs > 0 && in_cu > 0 && rate_ok;
  Json j;
  j["passed"] = ok;
  j["xi"] = xi.str();
  j["y"] = to_json(s.y);
  j["margin_B_cs_at_m"] = computed(at_m);
  j["margin_forward_D_cs"] = computed(in_cs);
  j["margin_backward_D_cu"] = computed(in_cu);
  j["graph_rate"] = bound(rate);
  j["graph_distance_first"] = measured(dist.empty() ? 0 : dist.front());
  j["graph_distance_last"] = measured(dist.empty() ? 0 : dist.back());
  j["rate_respected"] = rate_ok;
  return j;
}

Json leg_two(const CycleScenario& s, const std::vector<FiberMap>& maps, const IntersectionSetup& setup, double delta, int N,
             Rng& rng, bool& ok) {
  const int k = s.k;
  ok = false;
  Json j;
  const Vec w = iterate(maps[static_cast<std::size_t>(k)], s.x, s.n);
  const double w_margin = s.B_cu.point_depth(w);
  j["w"] = to_json(w);
  j["margin_w_in_B_cu"] = computed(w_margin);

  // Future keeping the forward orbit of w inside B_cu, so (ξ, w) lies in the cu maximal invariant set.
  Word fut;
  Vec u = w;
  double keep = kInf;
  for (int step = 0; step < N; ++step) {
    int best = 1;
    double best_depth = -kInf;
    for (int i = 1; i <= k; ++i) {
      double d = s.B_cu.point_depth(maps[static_cast<std::size_t>(i - 1)](u));
      if (d > best_depth) best_depth = d, best = i;
    }
    fut.push_back(best);
    u = maps[static_cast<std::size_t>(best - 1)](u);
    keep = std::min(keep, best_depth);
  }
  BiSequence xi(rng.word(k, N), {1}, fut, {1});
  j["xi"] = xi.str();
  j["margin_cu_orbit"] = computed(keep);

  auto hat = SkewProduct::one_step(maps, s.window, s.alpha, s.nu);
  BiSequence zeta = xi.with_past_word(Word(static_cast<std::size_t>(s.n), k + 1));
  Vec z = StableGraph(hat, xi, w).eval(zeta).value;
  j["zeta"] = zeta.str();
  j["z"] = to_json(z);
  j["z_offset"] = measured(sup_dist(z, w));

  Vec pulled = z;
  for (long i = 1; i <= s.n; ++i) pulled = hat.at(zeta, -i).inverse_apply(pulled);
  const double pull_margin = s.B_cs.point_depth(pulled);
  j["pulled_back"] = to_json(pulled);
  j["margin_pulled_back_in_B_cs"] = computed(pull_margin);
  if (!(w_margin > 0 && keep > 0 && pull_margin > 0)) {
    j["passed"] = false;
    return j;
  }

  BiSequence eta = zeta.shift(-s.n);
  StableGraph leaf(hat, eta, pulled);
  auto H = HorizontalDisk::graph(eta, pulled, [leaf](const BiSequence& e) { return leaf.eval(e).value; }, leaf.holder_constant(),
                                 delta, s.alpha, s.nu);
  auto hat_cs = SkewProduct::one_step(maps, s.D_cs, s.alpha, s.nu);
  auto res = embedded_disk_intersect(hat_cs, k, setup, H, N, rng.next());
  j["intersection"] = res.success;
  if (!res.success) {
    j["failure"] = res.failure;
    j["passed"] = false;
    return j;
  }
  // The witness lies on the strong unstable set of the cs blender; its forward orbit must follow (ξ, w) inside D_cu.
  Vec f = res.x;
  for (long i = 0; i < s.n; ++i) f = hat.at(res.xi, i)(f);
  double forward_cu = s.D_cu.point_depth(f);
  for (long i = s.n; i < s.n + N; ++i) {
    f = hat.at(res.xi, i)(f);
    forward_cu = std::min(forward_cu, s.D_cu.point_depth(f));
  }
  j["witness_xi"] = res.xi.str();
  j["witness_x"] = to_json(res.x);
  j["witness_word"] = word_str(res.word);
  j["margin_backward_B_cs"] = measured(res.min_margin);
  j["margin_forward_D_cu"] = computed(forward_cu);
  ok = res.min_margin > 0 && forward_cu > 0;
  j["passed"] = ok;
  return j;
}

}  // namespace

Json CycleScenario::to_json() const {
  Json j;
  j["k"] = k;
  j["alpha"] = alpha;
  j["nu"] = nu;
  j["window"] = symblend::to_json(window);
  Json ms = Json::array();
  for (const auto& f : maps) ms.push_back(symblend::to_json(f));
  j["maps"] = ms;
  j["D_cs"] = symblend::to_json(D_cs);
  j["D_cu"] = symblend::to_json(D_cu);
  j["B_cs"] = symblend::to_json(B_cs);
  j["B_cu"] = symblend::to_json(B_cu);
  Json t;
  t["x"] = symblend::to_json(x);
  t["n"] = n;
  t["y"] = symblend::to_json(y);
  t["m"] = m;
  j["transition"] = t;
  return j;
}

CycleScenario CycleScenario::from_json(const Json& j) {
  const std::string w = "scenario";
  if (!j.is_object()) throw ParseError(w + ": expected an object");
  CycleScenario s;
  const Json& kj = field(j, "k", w);
  if (!kj.is_number_integer() || kj.get<int>() < 1) throw ParseError(w + ".k: expected a positive integer");
  s.k = kj.get<int>();
  s.alpha = j.value("alpha", 1.0);
  s.nu = j.value("nu", 0.5);
  s.window = box_from_json(field(j, "window", w), w + ".window");
  const Json& ms = field(j, "maps", w);
  if (!ms.is_array()) throw ParseError(w + ".maps: expected an array");
  for (std::size_t i = 0; i < ms.size(); ++i) s.maps.push_back(fiber_map_from_json(ms[i], w + ".maps[" + std::to_string(i) + "]"));
  if (static_cast<int>(s.maps.size()) != s.k + 2)
    throw ParseError(w + ".maps: expected k + 2 = " + std::to_string(s.k + 2) + " maps, got " + std::to_string(s.maps.size()));
  s.D_cs = box_from_json(field(j, "D_cs", w), w + ".D_cs");
  s.D_cu = box_from_json(field(j, "D_cu", w), w + ".D_cu");
  s.B_cs = box_from_json(field(j, "B_cs", w), w + ".B_cs");
  s.B_cu = box_from_json(field(j, "B_cu", w), w + ".B_cu");
  const Json& t = field(j, "transition", w);
  s.x = vec_from_json(field(t, "x", w + ".transition"), w + ".transition.x");
  s.y = vec_from_json(field(t, "y", w + ".transition"), w + ".transition.y");
  const Json& nj = field(t, "n", w + ".transition");
  const Json& mj = field(t, "m", w + ".transition");
  if (!nj.is_number_integer() || !mj.is_number_integer()) throw ParseError(w + ".transition: n and m must be integers");
  s.n = nj.get<int>();
  s.m = mj.get<int>();
  return s;
}

Json CycleReport::to_json() const {
  Json j;
  j["passed"] = passed();
  if (!passed()) j["failed_stage"] = failed_stage();
  j["stages"] = stages_json();
  j["perturbations_run"] = perturbations_run;
  j["legs"] = legs;
  return j;
}

CycleReport verify_cycle(const CycleScenario& s, const CycleConfig& cfg) {
  CycleReport rep;
  const int k = s.k;
  const double na = std::pow(s.nu, s.alpha);

  {
    std::string why;
    const int dim = s.window.dim();
    if (static_cast<int>(s.maps.size()) != k + 2) why = "expected k + 2 maps";
    else if (s.D_cs.dim() != dim || s.D_cu.dim() != dim || s.B_cs.dim() != dim || s.B_cu.dim() != dim || s.x.size() != dim || s.y.size() != dim)
      why = "dimension mismatch";
    else if (auto ov = s.D_cs.intersect(s.D_cu); ov && ov->min_side() > 0)
      why = "D_cs and D_cu overlap";
    else if (!s.B_cs.inside_closed(s.D_cs) || !s.B_cu.inside_closed(s.D_cu)) why = "B_cs must lie in D_cs and B_cu in D_cu";
    else if (s.n < 1 || s.m < 1) why = "transition lengths must be positive";
    rep.add("geometry", why.empty(), why);
    if (!why.empty()) return rep;
  }
  {
    auto [gamma, gamma_hat_inv] = lipschitz_range(s.maps, s.maps.size(), s.window);
    auto [lcs, bcs] = lipschitz_range(s.maps, static_cast<std::size_t>(k), s.D_cs);
    auto [lcu, bcu] = lipschitz_range(s.maps, static_cast<std::size_t>(k), s.D_cu);
    Json d;
    d["nu_alpha"] = computed(na);
    d["gamma"] = computed(gamma);
    d["lambda_cs"] = computed(lcs);
    d["beta_cs"] = computed(bcs);
    d["lambda_cu"] = computed(lcu);
    d["beta_cu"] = computed(bcu);
    d["gamma_hat_inv"] = computed(gamma_hat_inv);
    bool chain = na < gamma && gamma <= lcs && lcs <= bcs && bcs < 1 && 1 < lcu && lcu <= bcu && bcu <= gamma_hat_inv && gamma_hat_inv < 1 / na;
    std::vector<std::string> regime;
    for (int i = 0; i < k; ++i) {
      const auto& f = s.maps[static_cast<std::size_t>(i)];
      if (!f.image(s.D_cs).inside_open(s.D_cs)) regime.push_back("phi_" + std::to_string(i + 1) + " does not map closed D_cs into D_cs");
      if (!s.D_cu.inside_open(f.image(s.D_cu))) regime.push_back("phi_" + std::to_string(i + 1) + "(D_cu) does not contain closed D_cu");
    }
    Json r = Json::array();
    for (auto& v : regime) r.push_back(v);
    d["regime_violations"] = r;
    rep.add("constants", chain && regime.empty(), chain ? (regime.empty() ? "" : regime.front()) : "the Lipschitz chain fails", d);
    if (!rep.passed()) return rep;
  }

  const auto cover = head(s.maps, k);
  {
    auto c = covering_check(IFS{cover, s.D_cs}, s.B_cs, cfg.resolution);
    rep.add("covering", c.verified(), c.verified() ? "" : "B_cs is not covered by the images", c.to_json());
    auto ci = covering_check(IFS{cover, s.D_cu}, s.B_cu, cfg.resolution, true);
    rep.add("inverse covering", ci.verified(), ci.verified() ? "" : "B_cu is not covered by the preimages", ci.to_json());
    if (!rep.passed()) return rep;
  }
  {
    Vec fx = iterate(s.maps[static_cast<std::size_t>(k)], s.x, s.n);
    Vec fy = iterate(s.maps[static_cast<std::size_t>(k + 1)], s.y, s.m);
    double mx = std::min(s.B_cs.point_depth(s.x), s.B_cu.point_depth(fx));
    double my = std::min(s.B_cu.point_depth(s.y), s.B_cs.point_depth(fy));
    Json d;
    d["phi_k1_n_x"] = to_json(fx);
    d["phi_k2_m_y"] = to_json(fy);
    d["margin_x"] = computed(mx);
    d["margin_y"] = computed(my);
    rep.add("cyclic intersections", mx > 0 && my > 0, mx > 0 ? (my > 0 ? "" : "phi_{k+2}^m(y) misses B_cs") : "phi_{k+1}^n(x) misses B_cu", d);
    if (!rep.passed()) return rep;
  }

  BlenderConfig bc;
  bc.budget = cfg.budget;
  bc.depth = cfg.depth;
  bc.disks = cfg.blender_disks;
  bc.perturbations = cfg.blender_perturbations;
  bc.safety = cfg.safety;
  bc.resolution = cfg.resolution;
  bc.seed = cfg.seed;
  auto cs = certify_blender(SkewProduct::one_step(cover, s.D_cs, s.alpha, s.nu), s.B_cs, bc);
  auto cu = certify_cu_blender(SkewProduct::one_step(cover, s.D_cu, s.alpha, s.nu), s.B_cu, bc);
  auto summary = [](const BlenderCertificate& c) {
    Json j;
    j["passed"] = c.passed;
    if (!c.passed) j["failed_stage"] = c.failed_stage, j["reason"] = c.reason;
    j["L"] = bound(c.L);
    j["delta_max"] = bound(c.delta_max);
    j["disks_tested"] = c.tested.size();
    return j;
  };
  rep.add("cs blender", cs.passed, cs.reason, summary(cs));
  rep.add("cu blender", cu.passed, cu.reason, summary(cu));
  if (!rep.passed()) return rep;

  IntersectionSetup setup;
  setup.B = s.B_cs;
  setup.k_used = k;
  setup.members = blender_members(SkewProduct::one_step(cover, s.D_cs, s.alpha, s.nu), s.B_cs, cfg.budget);
  setup.L = cs.L;

  Rng rng(cfg.seed);
  bool first_ok = true, second_ok = true;
  std::string first_fail, second_fail;
  for (int p = 0; p <= cfg.perturbations; ++p) {
    std::vector<FiberMap> maps = s.maps;
    if (p > 0)
      for (auto& f : maps) f = perturb_map(f, cfg.budget, rng);
    bool ok1 = false, ok2 = false;
    Json e;
    e["perturbation"] = p;
    e["first_leg"] = leg_one(s, maps, cfg.depth, rng, ok1);
    e["second_leg"] = leg_two(s, maps, setup, cs.delta_max, cfg.depth, rng, ok2);
    if (!ok1 && first_ok) first_fail = "perturbation " + std::to_string(p);
    if (!ok2 && second_ok) second_fail = "perturbation " + std::to_string(p);
    first_ok = first_ok && ok1;
    second_ok = second_ok && ok2;
    rep.legs.push_back(e);
  }
  rep.perturbations_run = cfg.perturbations;
  rep.add("first leg", first_ok, first_fail);
  rep.add("second leg", second_ok, second_fail);
  return rep;
}

}  // namespace symblend
