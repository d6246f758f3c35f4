#include "symblend/scenarios.hpp"

namespace symblend {

namespace {

Box interval(double lo, double hi) { return Box::interval(lo, hi); }

}  // namespace

CycleScenario cycle_scenario_1d(double cs_shift, double cu_shift) {
  const double p = 0.2, q = 0.8;
  CycleScenario s;
  s.k = 3;
  s.window = interval(0, 1);
  const double es[] = {0, -cs_shift, cs_shift};
  const double eu[] = {0, -cu_shift, cu_shift};
  for (int i = 0; i < 3; ++i) {
    // Contracting by 0.6 towards p on the left, inverse contracting by 0.6 towards q on the right.
    auto low = [&](double x) { return p + 0.6 * (x - p) + es[i]; };
    auto high = [&](double x) { return q + (x - q - eu[i]) / 0.6; };
    s.maps.push_back(FiberMap::piecewise_linear({0.1, 0.3, 0.7, 0.9}, {low(0.1), low(0.3), high(0.7), high(0.9)}));
  }
  s.maps.push_back(FiberMap::affine(vec_fill(1, 0.6), vec_fill(1, 0.4 * q)));
  s.maps.push_back(FiberMap::affine(vec_fill(1, 0.6), vec_fill(1, 0.4 * p)));
  s.D_cs = interval(0.1, 0.3);
  s.B_cs = interval(0.15, 0.25);
  s.D_cu = interval(0.7, 0.9);
  s.B_cu = interval(0.75, 0.85);
  s.x = vec_fill(1, 0.2);
  s.n = 7;
  s.y = vec_fill(1, 0.8);
  s.m = 7;
  return s;
}

MixingScenario mixing_scenario_1d() {
  MixingScenario s;
  s.k = 3;
  s.window = interval(0, 1);
  const std::vector<double> xs{0, 0.1, 0.3, 0.7, 0.9, 1};
  s.maps.push_back(FiberMap::piecewise_linear(xs, {0, 0.18, 0.38, 0.62, 0.82, 1}));
  s.maps.push_back(FiberMap::piecewise_linear(xs, {0, 0.17, 0.43, 0.67, 0.84, 1}));
  s.maps.push_back(FiberMap::piecewise_linear(xs, {0, 0.16, 0.33, 0.57, 0.83, 1}));
  const double q = 0.55;
  s.maps.push_back(FiberMap::piecewise_linear({0, 0.2, 0.45, 0.65, 0.8, 1},
                                              {0, 0.13, q - 0.1 * 5 / 3.0, q + 0.1 * 5 / 3.0, 0.87, 1}));
  s.D = interval(0.3, 0.7);
  s.B = interval(0.425, 0.575);
  s.p = vec_fill(1, 0.5);
  s.q = vec_fill(1, q);
  return s;
}

}  // namespace symblend
