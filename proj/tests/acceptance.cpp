#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "symblend/app.hpp"
#include "symblend/blender.hpp"
#include "symblend/ifs.hpp"
#include "symblend/invariant_graph.hpp"
#include "symblend/lamination.hpp"
#include "symblend/rng.hpp"
#include "symblend/scenarios.hpp"

using namespace symblend;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Box kUnit = Box::interval(0, 1);

SkewProduct affine_pair(double a, double b0, double b1, Box D) {
  return SkewProduct::one_step({FiberMap::affine(vec({a}), vec({b0})), FiberMap::affine(vec({a}), vec({b1}))}, D);
}

SkewProduct covering_pair() { return affine_pair(0.6, -0.05, 0.45, Box::interval(-0.5, 1.5)); }

BoxSet cantor_cover(int n, int resolution) {
  std::vector<Box> boxes{kUnit};
  for (int i = 0; i < n; ++i) {
    std::vector<Box> next;
    for (const auto& b : boxes) {
      double l = b.lo(0), w = (b.hi(0) - l) / 3;
      next.push_back(Box::interval(l, l + w));
      next.push_back(Box::interval(l + 2 * w, l + 3 * w));
    }
    boxes = std::move(next);
  }
  return BoxSet(boxes, resolution, false);
}

// Every diameter law of one run, checked step by step from the diagnostics.
bool laws_hold(const IntersectionResult& r, double L) {
  if (!r.diameter_laws) return false;
  for (const auto& st : r.steps)
    if (!(st.v_measured <= st.v_radius * (1 + 1e-12) && st.a_diameter < L)) return false;
  return true;
}

int law_runs = 0, law_violations = 0;

void record_laws(const IntersectionResult& r, double L) {
  if (r.steps.empty()) return;
  ++law_runs;
  if (!laws_hold(r, L)) ++law_violations;
}

Outcome hutchinson() {
  const double tol = 1e-3, cell = std::ldexp(1.0, -10);
  auto t0 = std::chrono::steady_clock::now();
  auto half = hutchinson_attractor(IFS::of(affine_pair(0.5, 0, 0.5, kUnit)), tol, 10);
  double t_half = seconds_since(t0);
  double d_half = hausdorff(half.set, BoxSet({kUnit}, 10));
  t0 = std::chrono::steady_clock::now();
  auto third = hutchinson_attractor(IFS::of(affine_pair(1 / 3.0, 0, 2 / 3.0, kUnit)), tol, 10);
  double t_third = seconds_since(t0);
  double d_third = hausdorff(third.set, cantor_cover(10, 10));
  bool ok = d_half <= tol + cell && d_third <= std::pow(3.0, -10) + tol && t_half < 5 && t_third < 5;
  return {ok, fmt("halves d_H=%.3g, thirds d_H=%.3g, times %.2fs/%.2fs", d_half, d_third, t_half, t_third)};
}

Outcome covering() {
  auto t0 = std::chrono::steady_clock::now();
  auto good = covering_check(IFS::of(covering_pair()), kUnit);
  auto bad = covering_check(IFS::of(affine_pair(0.5, 0, 0.5, kUnit)), kUnit);
  double t = seconds_since(t0);
  bool refuted = !bad.verified() && bad.status == Containment::Refuted && bad.witness.has_value();
  if (refuted)
    for (const auto& im : bad.images) refuted = refuted && !im.contains_open(*bad.witness);
  bool ok = good.verified() && good.margin >= 0.049 && good.lebesgue_lower_bound >= 0.09 && refuted && t < 1;
  return {ok, fmt("margin %.4g, Lebesgue bound %.4g, halves refuted at x=%.6g, %.3fs", good.margin, good.lebesgue_lower_bound,
                  bad.witness ? (*bad.witness)(0) : NAN, t)};
}

Outcome graph_cross_oracle() {
  auto mix = mixing_scenario_1d();
  std::vector<SkewProduct> systems{covering_pair(), affine_pair(0.5, 0, 0.5, kUnit), affine_pair(1 / 3.0, 0, 2 / 3.0, kUnit),
                                   SkewProduct::one_step({mix.maps[0], mix.maps[1], mix.maps[2]}, mix.D)};
  {
    auto fam = translation_family(FiberMap::affine(vec({0.6}), vec({0})), Box::interval(-0.3, 0.3));
    systems.push_back(SkewProduct::one_step(fam.maps, fam.D));
  }
  bool ok = true;
  double worst_ratio = 0, worst_residual = 0;
  Rng rng(101);
  for (const auto& phi : systems) {
    auto gi = graph_image(phi, 10, 40, 10);
    auto K = hutchinson_attractor(IFS::of(phi), 1e-3, 10);
    const double cell = std::ldexp(1.0, -10);
    double allowed = gi.tolerance + K.error_bound + (gi.set.snapped() ? cell : 0) + (K.set.snapped() ? cell : 0) + std::ldexp(1.0, -16);
    double d = hausdorff(gi.set, K.set);
    worst_ratio = std::max(worst_ratio, d / allowed);
    ok = ok && d <= allowed;
    const double bound = 2 * std::pow(phi.beta(), 40) * phi.D().max_side() + 1e-9;
    for (int t = 0; t < 1000; ++t) {
      BiSequence xi = rng.sequence(phi.k());
      double r = sup_dist(phi.at(xi)(evaluate_graph(phi, xi, 40).value), evaluate_graph(phi, xi.shift(1), 40).value);
      worst_residual = std::max(worst_residual, r);
      ok = ok && r <= bound;
    }
  }
  return {ok, fmt("%g systems, max d_H/tolerance %.3g, max invariance residual %.3g", static_cast<double>(systems.size()),
                  worst_ratio, worst_residual)};
}

Outcome divergence_criterion() {
  Rng rng(102);
  double worst = 0, worst_C = 0;
  int samples = 0, escapes = 0, redrawn = 0;
  for (int sys = 0; sys < 5; ++sys) {
    // Depth-1 perturbations drawn until C_psi <= 0.02.
    auto psi = random_translation(covering_pair().lifted(1), 0.004, rng);
    while (psi.holder() > 0.02) {
      ++redrawn;
      psi = random_translation(covering_pair().lifted(1), 0.004, rng);
    }
    worst_C = std::max(worst_C, psi.holder());
    while (samples < 200 * (sys + 1)) {
      int i = rng.integer(1, 10), n = rng.integer(i, 12);
      double x = rng.uniform(0.1, 0.9);
      Word out;
      double y = x;
      for (int j = 0; j < n; ++j) {
        int s = y < 0.5 ? 1 : 2;
        out.push_back(s);
        y = s == 1 ? (y + 0.05) / 0.6 : (y - 0.45) / 0.6;
      }
      Word w = reversed(out), fut = rng.word(2, n + 1);
      w.insert(w.end(), fut.begin(), fut.end());
      Cylinder cyl{w, -n};
      auto a = rng.sequence(2).with_word(-n, w), b = rng.sequence(2).with_word(-n, w);
      try {
        worst = std::max(worst, measure_backward_divergence(psi, cyl, vec({x}), i, a, b).ratio());
        ++samples;
      } catch (const DomainEscape&) {
        ++escapes;
      }
    }
  }
  return {worst <= 1, fmt("%g samples, max measured/bound %.4g, max C_psi %.3g, %g resampled escapes", samples, worst, worst_C, escapes) +
                         fmt(", %g systems redrawn", redrawn)};
}

Outcome brute_force() {
  auto phi = covering_pair();
  auto setup = intersection_setup(phi, kUnit, 0.0);
  Rng rng(103);
  int agree = 0, successes = 0;
  bool margins = true;
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 50; ++i) {
    int N = 4 + i % 9;
    HorizontalDisk h = i < 10 ? HorizontalDisk::flat(rng.sequence(2), vec({i % 2 ? -0.2 : 1.3}), 0.02)
                              : random_disk(i % 2 ? DiskKind::Flat : DiskKind::Tilted, kUnit, 2, 1, 0.026, 1, 0.5, rng);
    auto res = disk_intersect(phi, setup, h, N);
    record_laws(res, setup.L);
    auto bf = brute_force_words(phi, kUnit, h, N);
    bool listed = !res.success || std::find(bf.admissible.begin(), bf.admissible.end(), res.word) != bf.admissible.end();
    if (res.success == bf.any() && listed) ++agree;
    if (res.success) {
      ++successes;
      margins = margins && backward_margin(phi, res.xi, res.x, kUnit, N) > 0;
    }
  }
  double t = seconds_since(t0);
  return {agree == 50 && margins && t < 30,
          fmt("agreement %g/50 (%g successes), %.2fs", agree, successes, t) + (margins ? ", all margins positive" : ", a margin failed")};
}

Outcome diameter_laws() {
  // Runs from the brute-force comparison plus a full certificate battery on perturbed systems.
  BlenderConfig cfg;
  auto cert = certify_blender(covering_pair(), kUnit, cfg);
  for (const auto& td : cert.tested) record_laws(td.result, cert.L);
  auto phi = covering_pair();
  Rng rng(104);
  for (int p = 0; p < 4; ++p) {
    auto psi = random_translation(phi.lifted(1), 0.0008, rng);
    auto setup = intersection_setup(psi, kUnit, 0.0016);
    for (int d = 0; d < 10; ++d) {
      auto H = random_disk(d % 2 ? DiskKind::Random : DiskKind::Tilted, kUnit, 2, 1, 0.02, 1, 0.5, rng);
      record_laws(disk_intersect(psi, setup, H, 30, rng.next()), setup.L);
    }
  }
  return {law_runs > 0 && law_violations == 0, fmt("%g runs checked, %g violations", law_runs, law_violations)};
}

Outcome unstable_rate() {
  Rng rng(105);
  auto psi = random_translation(covering_pair().lifted(2), 0.003, rng);
  const double r = psi.beta() * std::pow(psi.nu(), psi.alpha());
  double worst = 0;
  bool ok = true;
  for (int t = 0; t < 1000; ++t) {
    BiSequence xi = rng.sequence(2);
    BiSequence xp = xi.with_future_word(rng.word(2, rng.integer(1, 4)));
    if (xp == xi) continue;
    Vec x = evaluate_graph(psi, xi).value;
    double da = std::pow(metric(xi, xp, psi.nu()), psi.alpha());
    Vec prev = unstable_iterate(psi, xi, xp, x, 0);
    for (int n = 0; n <= 15; ++n) {
      Vec next = unstable_iterate(psi, xi, xp, x, n + 1);
      double allowed = psi.holder() * std::pow(r, n + 1) * da;
      worst = std::max(worst, sup_dist(next, prev) / allowed);
      ok = ok && sup_dist(next, prev) <= allowed * (1 + 1e-9) + 1e-15;
      prev = next;
    }
  }
  BiSequence xi = rng.sequence(2);
  UnstableGraph u(psi, xi);
  double q = 0;
  for (int t = 0; t < 1000; ++t) {
    BiSequence a = xi.with_future_word(rng.word(2, 6)), b = xi.with_future_word(rng.word(2, 6));
    if (a == b) continue;
    q = std::max(q, sup_dist(u.eval(a).value, u.eval(b).value) / std::pow(metric(a, b, psi.nu()), psi.alpha()));
  }
  ok = ok && q <= u.holder_constant() + 1e-6;
  return {ok, fmt("max step/bound %.4g, Holder quotient %.4g <= %.4g", worst, q, u.holder_constant())};
}

Outcome translation_pipeline() {
  BlenderConfig cfg;
  cfg.budget = 0.005;
  cfg.depth = 30;
  bool ok = true;
  std::string detail;
  for (int c = 1; c <= 2; ++c) {
    auto fam = translation_family(FiberMap::affine(vec_fill(c, 0.6), vec_fill(c, 0)), Box::cube(vec_fill(c, 0), 0.3));
    auto cert = certify_blender(SkewProduct::one_step(fam.maps, fam.D), fam.B, cfg);
    ok = ok && fam.certificate.verified() && cert.passed;
    detail += fmt("c=%g k=%g: covering ", c, fam.k) + (fam.certificate.verified() ? "yes" : "no") + ", certificate " +
              (cert.passed ? std::string("yes") : "no (" + cert.failed_stage + ")") + "; ";
  }
  return {ok, detail};
}

Outcome cycle() {
  CycleConfig cfg;
  cfg.budget = 0.005;
  cfg.depth = 30;
  cfg.perturbations = 20;
  auto rep = verify_cycle(cycle_scenario_1d(), cfg);
  bool ok = rep.passed() && rep.perturbations_run == 20;
  std::string detail = std::string("nominal + 20 perturbations: ") + (rep.passed() ? "pass" : "fail at " + rep.failed_stage());
  CycleConfig small = cfg;
  small.perturbations = 2;
  auto expect = [&](CycleScenario s, const std::string& stage, const char* what) {
    auto r = verify_cycle(s, small);
    bool hit = r.failed_stage() == stage;
    ok = ok && hit;
    detail += std::string("; ") + what + " -> " + (r.failed_stage().empty() ? "passed" : r.failed_stage());
  };
  auto s4 = cycle_scenario_1d();
  s4.maps[3] = FiberMap::identity(1);
  expect(s4, "cyclic intersections", "no first transition");
  auto s5 = cycle_scenario_1d();
  s5.maps[4] = FiberMap::identity(1);
  expect(s5, "cyclic intersections", "no second transition");
  expect(cycle_scenario_1d(0, 0.035), "covering", "no cs covering");
  expect(cycle_scenario_1d(0.035, 0), "inverse covering", "no cu covering");
  return {ok, detail};
}

Outcome mixing() {
  MixingConfig cfg;
  cfg.pairs = 100;
  cfg.horizon = 40;
  cfg.n0_max = 25;
  cfg.perturbations = 20;
  auto t0 = std::chrono::steady_clock::now();
  auto rep = verify_mixing(mixing_scenario_1d(), cfg);
  double t = seconds_since(t0);
  const Stage* nh = rep.find("non-hyperbolicity");
  bool marker = nh && nh->passed && nh->data.contains("attracting") && nh->data.contains("repelling");
  double ma = marker ? nh->data["attracting"]["multiplier"]["value"].get<double>() : NAN;
  double mr = marker ? nh->data["repelling"]["multiplier"]["value"].get<double>() : NAN;
  bool ok = rep.passed() && rep.max_n0 <= 25 && marker && t < 120;
  return {ok, fmt("max n0 %g over 100 pairs x 21 systems, multipliers %.4g / %.4g, %.2fs", rep.max_n0, ma, mr, t) +
                  (rep.passed() ? "" : " failed at " + rep.failed_stage())};
}

Outcome determinism() {
  auto sys = to_json(covering_pair());
  sys["B"] = to_json(kUnit);
  Json disk = HorizontalDisk::flat(BiSequence::constant(1), vec({0.3}), 0.02).to_json();
  std::vector<std::pair<std::string, Json>> runs{
      {"attractor", {{"seed", 5}, {"system", sys}}},
      {"cover-check", {{"seed", 5}, {"system", sys}}},
      {"invariant-graph", {{"seed", 5}, {"system", sys}, {"words", 4}}},
      {"blender-certify", {{"seed", 5}, {"system", sys}, {"disks", 5}, {"perturbations", 2}}},
      {"disk-intersect", {{"seed", 5}, {"system", sys}, {"disk", disk}}},
      {"cycle-check", {{"seed", 5}, {"scenario", cycle_scenario_1d().to_json()}, {"perturbations", 3}}},
      {"mixing-check", {{"seed", 5}, {"scenario", mixing_scenario_1d().to_json()}, {"pairs", 10}, {"perturbations", 2}}}};
  int identical = 0, replayed = 0;
  for (const auto& [cmd, cfg] : runs) {
    std::string a = report_text(run_command(cmd, cfg)), b = report_text(run_command(cmd, cfg));
    if (a == b) ++identical;
    Json rep = run_command("replay", {{"report", Json::parse(a)}});
    if (rep["passed"] == true) ++replayed;
  }
  double n = static_cast<double>(runs.size());
  return {identical == static_cast<int>(runs.size()) && replayed == static_cast<int>(runs.size()),
          fmt("%g/%g commands byte-identical, %g/%g replayed", identical, n, replayed, n)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Hutchinson attractors", hutchinson},
      {"covering certification", covering},
      {"invariant graph vs attractor", graph_cross_oracle},
      {"backward divergence bound", divergence_criterion},
      {"disk intersection vs brute force", brute_force},
      {"diameter laws", diameter_laws},
      {"unstable graph rate", unstable_rate},
      {"translation family pipeline", translation_pipeline},
      {"symbolic cycle scenario", cycle},
      {"robust mixing scenario", mixing},
      {"determinism and replay", determinism}};
  int failed = 0, i = 0;
  for (const auto& [name, run] : criteria) {
    ++i;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d %s: %s\n", o.pass ? "PASS" : "FAIL", i, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
