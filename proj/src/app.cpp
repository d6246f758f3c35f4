#include "symblend/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "symblend/blender.hpp"
#include "symblend/cycles.hpp"
#include "symblend/ifs.hpp"
#include "symblend/invariant_graph.hpp"
#include "symblend/mixing.hpp"

namespace symblend {

namespace {

template <class T>
T get(const Json& config, const char* key, T dflt) {
  if (!config.contains(key)) return dflt;
  try {
    return config.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string("config.") + key + ": wrong type");
  }
}

Box region(const Json& config, const char* key, const Json& fallback) {
  if (config.contains(key)) return box_from_json(config.at(key), std::string("config.") + key);
  if (fallback.is_object() && fallback.contains(key)) return box_from_json(fallback.at(key), std::string("system.") + key);
  throw ParseError(std::string("config: missing region '") + key + "'");
}

void check_common(const Json& config) {
  int r = get(config, "resolution", 10);
  if (r < 1 || r > 30) throw ParseError("config.resolution: must be in 1..30");
  if (config.contains("depth") && get(config, "depth", 30) < 1) throw ParseError("config.depth: must be at least 1");
}

SkewProduct system_of(const Json& config) {
  SkewProduct s = skew_from_json(field(config, "system", "config"));
  double nu = s.nu(), alpha = s.alpha();
  if (!(nu > 0 && nu < 1)) throw ParseError("system.nu: must lie in (0, 1)");
  if (!(alpha > 0 && alpha <= 1)) throw ParseError("system.alpha: must lie in (0, 1]");
  return s;
}

Json attractor_cmd(const Json& config, bool& passed) {
  SkewProduct s = system_of(config);
  if (s.depth() != 0) throw ParseError("system.depth: the attractor needs a one-step system");
  double tol = get(config, "tol", 1e-3);
  int max_it = get(config, "max_iterations", 100000);
  auto res = hutchinson_attractor(IFS::of(s), tol, get(config, "resolution", 10), max_it);
  passed = res.iterations < max_it;
  Json j;
  j["iterations"] = res.iterations;
  j["last_step"] = measured(res.last_step);
  j["error_bound"] = bound(res.error_bound);
  j["boxes"] = res.set.size();
  j["hull"] = to_json(res.set.hull());
  j["csv"] = res.set.to_csv();
  return j;
}

Json cover_cmd(const Json& config, bool& passed) {
  SkewProduct s = system_of(config);
  if (s.depth() != 0) throw ParseError("system.depth: covering checks need a one-step system");
  Box B = region(config, "B", config.at("system"));
  auto cert = covering_check(IFS::of(s), B, get(config, "resolution", 10), get(config, "inverse", false));
  passed = cert.verified();
  return cert.to_json();
}

Json graph_cmd(const Json& config, bool& passed) {
  SkewProduct s = system_of(config);
  int words = get(config, "words", 4);
  int N = get(config, "depth", 40);
  if (words < 1 || words > 12) throw ParseError("config.words: must be in 1..12");
  if (!(s.beta() < 1)) throw ParseError("system: fiber maps must contract (beta < 1)");
  auto gi = graph_image(s, words, N, get(config, "resolution", 10));
  std::ostringstream csv;
  csv << "past_word";
  for (int a = 0; a < s.D().dim(); ++a) csv << ",g" << a;
  csv << ",error\n";
  const BiSequence base = BiSequence::constant(1);
  for (const auto& w : all_words(s.k(), words)) {
    Vec g = evaluate_graph(s, base.with_past_word(w), gi.N).value;
    std::string word = word_str(w);
    std::replace(word.begin(), word.end(), ',', ' ');
    csv << word;
    for (int a = 0; a < g.size(); ++a) csv << ',' << fmt_num(g(a));
    csv << ',' << fmt_num(gi.pointwise_error) << '\n';
  }
  passed = true;
  Json j;
  j["words"] = words;
  j["N"] = gi.N;
  j["pointwise_error"] = bound(gi.pointwise_error);
  j["tolerance"] = bound(gi.tolerance);
  j["hull"] = to_json(gi.set.hull());
  j["csv"] = csv.str();
  return j;
}

BlenderConfig blender_config(const Json& config) {
  BlenderConfig bc;
  bc.budget = get(config, "budget", bc.budget);
  bc.depth = get(config, "depth", bc.depth);
  bc.disks = get(config, "disks", bc.disks);
  bc.perturbations = get(config, "perturbations", bc.perturbations);
  bc.safety = get(config, "safety", bc.safety);
  bc.resolution = get(config, "resolution", bc.resolution);
  bc.seed = get<std::uint64_t>(config, "seed", bc.seed);
  if (!(bc.budget >= 0)) throw ParseError("config.budget: must be non-negative");
  return bc;
}

Json blender_cmd(const Json& config, bool& passed) {
  SkewProduct s = system_of(config);
  Box B = region(config, "B", config.at("system"));
  auto bc = blender_config(config);
  auto cert = get(config, "cu", false) ? certify_cu_blender(s, B, bc) : certify_blender(s, B, bc);
  passed = cert.passed;
  return cert.to_json();
}

Json disk_cmd(const Json& config, bool& passed) {
  SkewProduct s = system_of(config);
  Box B = region(config, "B", config.at("system"));
  auto H = HorizontalDisk::from_json(field(config, "disk", "config"), s.D().dim());
  double budget = get(config, "budget", 0.005);
  int N = get(config, "depth", 30);
  auto setup = intersection_setup(s, B, budget, 0, get(config, "resolution", 10));
  auto res = disk_intersect(s, setup, H, N, get<std::uint64_t>(config, "seed", 1));
  passed = res.success;
  Json j;
  j["L"] = bound(setup.L);
  j["members"] = Json::array();
  for (const auto& m : setup.members) j["members"].push_back(to_json(m));
  j["intersection"] = res.to_json();
  return j;
}

Json cycle_cmd(const Json& config, bool& passed) {
  auto sc = CycleScenario::from_json(field(config, "scenario", "config"));
  CycleConfig cc;
  cc.budget = get(config, "budget", cc.budget);
  cc.depth = get(config, "depth", cc.depth);
  cc.perturbations = get(config, "perturbations", cc.perturbations);
  cc.resolution = get(config, "resolution", cc.resolution);
  cc.seed = get<std::uint64_t>(config, "seed", cc.seed);
  auto rep = verify_cycle(sc, cc);
  passed = rep.passed();
  return rep.to_json();
}

Json mixing_cmd(const Json& config, bool& passed) {
  auto sc = MixingScenario::from_json(field(config, "scenario", "config"));
  MixingConfig mc;
  mc.budget = get(config, "budget", mc.budget);
  mc.depth = get(config, "depth", mc.depth);
  mc.pairs = get(config, "pairs", mc.pairs);
  mc.horizon = get(config, "horizon", mc.horizon);
  mc.n0_max = get(config, "n0_max", mc.n0_max);
  mc.perturbations = get(config, "perturbations", mc.perturbations);
  mc.resolution = get(config, "resolution", mc.resolution);
  mc.seed = get<std::uint64_t>(config, "seed", mc.seed);
  if (mc.pairs < 1) throw ParseError("config.pairs: must be at least 1");
  auto rep = verify_mixing(sc, mc);
  passed = rep.passed();
  return rep.to_json();
}

// Independent re-check of mixing witnesses: iterate each recorded point along its recorded word.
Json check_mixing_witnesses(const Json& original, bool& ok) {
  auto sc = MixingScenario::from_json(original.at("config").at("scenario"));
  int checked = 0, bad = 0;
  for (const auto& p : original.at("result").at("pairs")) {
    if (!p.contains("witness")) continue;
    ++checked;
    const auto& w = p.at("witness");
    int n = w.at("n").get<int>();
    BiSequence xi = BiSequence::parse(w.at("xi").get<std::string>());
    Vec x = vec_from_json(w.at("x"), "witness.x");
    Box U = box_from_json(p.at("U").at("box"), "U.box"), V = box_from_json(p.at("V").at("box"), "V.box");
    Vec y = x;
    for (long i = 0; i < n; ++i) y = sc.maps[static_cast<std::size_t>(xi[i] - 1)](y);
    Cylinder cu{parse_word(p.at("U").at("word").get<std::string>()), p.at("U").at("offset").get<long>()};
    Cylinder cv{parse_word(p.at("V").at("word").get<std::string>()), p.at("V").at("offset").get<long>()};
    if (!(U.contains_open(x) && V.contains_open(y) && cu.contains(xi) && cv.contains(xi.shift(n)))) ++bad;
  }
  ok = bad == 0;
  return {{"checked", checked}, {"failed", bad}};
}

Json replay_cmd(const Json& config, bool& passed) {
  const Json& original = field(config, "report", "config");
  if (!original.is_object() || !original.contains("command") || !original.contains("config"))
    throw ParseError("report: expected fields 'command' and 'config'");
  const std::string cmd = original.at("command").get<std::string>();
  if (cmd == "replay") throw ParseError("report: cannot replay a replay");
  Json again = run_command(cmd, original.at("config"));
  bool identical = report_text(again) == report_text(original);
  Json j;
  j["command"] = cmd;
  j["identical"] = identical;
  j["original_passed"] = original.value("passed", false);
  j["replayed_passed"] = again.at("passed");
  bool witnesses_ok = true;
  if (cmd == "mixing-check" && original.contains("result")) j["witnesses"] = check_mixing_witnesses(original, witnesses_ok);
  passed = identical && witnesses_ok && again.at("passed") == original.value("passed", false);
  return j;
}

}  // namespace

Json run_command(const std::string& command, const Json& config) {
  if (!config.is_object()) throw ParseError("config: expected an object");
  check_common(config);
  bool passed = false;
  Json result;
  if (command == "attractor") result = attractor_cmd(config, passed);
  else if (command == "cover-check") result = cover_cmd(config, passed);
  else if (command == "invariant-graph") result = graph_cmd(config, passed);
  else if (command == "blender-certify") result = blender_cmd(config, passed);
  else if (command == "disk-intersect") result = disk_cmd(config, passed);
  else if (command == "cycle-check") result = cycle_cmd(config, passed);
  else if (command == "mixing-check") result = mixing_cmd(config, passed);
  else if (command == "replay") result = replay_cmd(config, passed);
  else throw ParseError("unknown command '" + command + "'");
  Json rep;
  rep["command"] = command;
  rep["config"] = config;
  rep["passed"] = passed;
  rep["result"] = result;
  return rep;
}

std::string report_text(const Json& report) { return report.dump(2) + "\n"; }

std::string report_csv(const Json& report) {
  if (report.contains("result") && report["result"].is_object() && report["result"].contains("csv"))
    return report["result"]["csv"].get<std::string>();
  return {};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Symbolic blender toolkit: covering checks, invariant graphs, blender certificates, cycles and mixing"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  int resolution = 10;
  std::string out, csv_out;
  app.add_option("--seed", seed, "Random seed recorded in the report")->capture_default_str();
  app.add_option("--resolution", resolution, "Resolution exponent r (cells of side 2^-r)")->capture_default_str();
  app.add_option("--out", out, "Write the JSON report here (atomically) instead of stdout");
  app.add_option("--csv", csv_out, "Write the CSV companion output here (attractor, invariant-graph)");

  std::string system_path, B_text, scenario_path, disk_path, report_path;
  double tol = 1e-3, budget = 0.005, safety = 0.1;
  int depth = 30, disks = 20, perturbations = 5, words = 4, pairs = 100, horizon = 40, n0_max = 25;
  bool inverse = false, cu = false;

  auto* att = app.add_subcommand("attractor", "Hutchinson attractor of a one-step system");
  att->add_option("--ifs,--skew", system_path, "System JSON")->required();
  att->add_option("--tol", tol)->capture_default_str();

  auto* cov = app.add_subcommand("cover-check", "Certify or refute the covering property on B");
  cov->add_option("--ifs,--skew", system_path, "System JSON")->required();
  cov->add_option("--B", B_text, "Region B as \"lo,hi\" per axis (default: the system's B)");
  cov->add_flag("--inverse", inverse, "Check the covering property for the inverse maps");

  auto* gr = app.add_subcommand("invariant-graph", "Invariant graph values on all past words");
  gr->add_option("--skew", system_path, "System JSON")->required();
  gr->add_option("--words", words, "Length of the past words")->capture_default_str();
  gr->add_option("--depth", depth, "Composition depth N")->capture_default_str();

  auto* bl = app.add_subcommand("blender-certify", "Certify the blender property on B");
  bl->add_option("--skew", system_path, "System JSON")->required();
  bl->add_option("--B", B_text, "Region B");
  bl->add_option("--budget", budget)->capture_default_str();
  bl->add_option("--depth", depth)->capture_default_str();
  bl->add_option("--disks", disks)->capture_default_str();
  bl->add_option("--perturbations", perturbations)->capture_default_str();
  bl->add_option("--safety", safety)->capture_default_str();
  bl->add_flag("--cu", cu, "Certify the cu-blender of the inverse system");

  auto* dk = app.add_subcommand("disk-intersect", "Run the disk-intersection algorithm on one disk");
  dk->add_option("--skew", system_path, "System JSON")->required();
  dk->add_option("--B", B_text, "Region B");
  dk->add_option("--disk", disk_path, "Disk JSON {zeta, z, alpha, C, delta, kind}")->required();
  dk->add_option("--budget", budget)->capture_default_str();
  dk->add_option("--depth", depth)->capture_default_str();

  auto* cy = app.add_subcommand("cycle-check", "Verify a symbolic cycle scenario");
  cy->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  cy->add_option("--budget", budget)->capture_default_str();
  cy->add_option("--depth", depth)->capture_default_str();
  cy->add_option("--perturbations", perturbations, "Sampled perturbations (default 20)");

  auto* mx = app.add_subcommand("mixing-check", "Verify robust mixing of a scenario");
  mx->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  mx->add_option("--pairs", pairs)->capture_default_str();
  mx->add_option("--horizon", horizon)->capture_default_str();
  mx->add_option("--n0-max", n0_max)->capture_default_str();
  mx->add_option("--budget", budget)->capture_default_str();
  mx->add_option("--perturbations", perturbations, "Sampled perturbations (default 20)");

  auto* rp = app.add_subcommand("replay", "Re-run a report and compare it byte for byte");
  rp->add_option("report", report_path, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  try {
    Json config;
    config["seed"] = seed;
    config["resolution"] = resolution;
    auto set_if = [&](const char* flag, const char* key, auto value) {
      if (sub->count(flag)) config[key] = value;
    };
    if (!system_path.empty()) config["system"] = load_json(system_path);
    if (!B_text.empty()) config["B"] = to_json(parse_box_arg(B_text));
    if (cmd == "attractor") config["tol"] = tol;
    if (cmd == "cover-check") config["inverse"] = inverse;
    if (cmd == "invariant-graph") {
      config["words"] = words;
      config["depth"] = depth;
    }
    if (cmd == "blender-certify" || cmd == "disk-intersect" || cmd == "cycle-check" || cmd == "mixing-check") {
      config["budget"] = budget;
      if (cmd != "mixing-check") config["depth"] = depth;
    }
    if (cmd == "blender-certify") {
      config["disks"] = disks;
      config["perturbations"] = perturbations;
      config["safety"] = safety;
      config["cu"] = cu;
    }
    if (cmd == "disk-intersect") config["disk"] = load_json(disk_path);
    if (cmd == "cycle-check" || cmd == "mixing-check") {
      config["scenario"] = load_json(scenario_path);
      config["perturbations"] = 20;
      set_if("--perturbations", "perturbations", perturbations);
    }
    if (cmd == "mixing-check") {
      config["pairs"] = pairs;
      config["horizon"] = horizon;
      config["n0_max"] = n0_max;
    }
    Json report;
    if (cmd == "replay") {
      report = run_command(cmd, Json{{"report", load_json(report_path)}});
    } else {
      report = run_command(cmd, config);
    }
    const std::string text = report_text(report);
    if (out.empty()) std::cout << text;
    else write_file_atomic(out, text);
    if (!csv_out.empty()) write_file_atomic(csv_out, report_csv(report));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << cmd << ": " << (report["passed"].get<bool>() ? "passed" : "failed") << " in " << secs << " s\n";
    return report["passed"].get<bool>() ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace symblend
