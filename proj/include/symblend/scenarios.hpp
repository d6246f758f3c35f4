#pragma once

#include "symblend/cycles.hpp"
#include "symblend/mixing.hpp"

namespace symblend {

// Three covering maps contracting near p = 0.2 and expanding near q = 0.8, plus the two transitions.
// cs_shift spreads the contracting branches, cu_shift spreads the inverses of the expanding branches.
CycleScenario cycle_scenario_1d(double cs_shift = 0.035, double cu_shift = 0.035);

// Maps of [0, 1] fixing both ends: three covering maps around B = (0.425, 0.575) and a fourth with
// a repelling fixed point at 0.55.
MixingScenario mixing_scenario_1d();

}  // namespace symblend
