#pragma once

#include <cstdint>
#include <random>

#include "symblend/sequence.hpp"

namespace symblend {

// mt19937_64 with platform-independent real/integer draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }
  std::uint64_t next() { return eng_(); }
  Word word(int k, int n) {
    Word w(static_cast<std::size_t>(n));
    for (auto& s : w) s = integer(1, k);
    return w;
  }
  // Eventually periodic sequence with random transients and short periods.
  BiSequence sequence(int k, int max_transient = 6, int max_period = 3) {
    Word pt = word(k, integer(0, max_transient)), pp = word(k, integer(1, max_period));
    Word ft = word(k, integer(0, max_transient)), fp = word(k, integer(1, max_period));
    return {pt, pp, ft, fp};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace symblend
