#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace symblend {

using Word = std::vector<int>;

// One half of a bi-infinite sequence: transient followed by a repeated period.
struct Ray {
  Word transient;
  Word period;

  int at(std::size_t j) const {
    if (j < transient.size()) return transient[j];
    return period[(j - transient.size()) % period.size()];
  }
  bool operator==(const Ray&) const = default;
};

class BiSequence {
 public:
  BiSequence();
  // Past words are given in index order (…, ξ_{-2}, ξ_{-1}), future words as (ξ_0, ξ_1, …).
  BiSequence(Word past_transient, Word past_period, Word future_transient, Word future_period);

  static BiSequence constant(int s);
  static BiSequence periodic(const Word& period);  // ξ_0 = period[0]
  static BiSequence parse(const std::string& text);

  int operator[](long i) const { return i >= 0 ? future_.at(static_cast<std::size_t>(i)) : past_.at(static_cast<std::size_t>(-1 - i)); }

  // Past stored outward: past_ray().at(j) = ξ_{-1-j}.
  const Ray& past_ray() const { return past_; }
  const Ray& future_ray() const { return future_; }

  int max_symbol() const;
  std::string str() const;

  BiSequence shift(long n) const;
  BiSequence conjugate() const;
  // ξ with the symbols at indices -n..-1 replaced by w (w in index order, w.size() == n).
  BiSequence with_past_word(const Word& w) const;
  // ξ with the symbols at indices 1..n replaced by w.
  BiSequence with_future_word(const Word& w) const;
  // ξ with symbols at offset..offset+|w|-1 replaced by w.
  BiSequence with_word(long offset, const Word& w) const;

  Word segment(long from, long to) const;  // indices from..to inclusive

  // Index range [−bound, bound] past which both rays are periodic; used for exact comparisons.
  std::size_t horizon_with(const BiSequence& other) const;

  bool operator==(const BiSequence& o) const { return past_ == o.past_ && future_ == o.future_; }
  bool operator<(const BiSequence& o) const;

 private:
  static Ray canonical(Ray r);
  static Ray from_words(Word front, const Ray& rest);
  Ray past_;
  Ray future_;
};

// ℓ = min{i ≥ 0 : ξ_i ≠ ζ_i or ξ_{-i} ≠ ζ_{-i}}; nullopt when equal.
std::optional<long> first_disagreement(const BiSequence& a, const BiSequence& b);
double metric(const BiSequence& a, const BiSequence& b, double nu);

struct Cylinder {
  Word word;
  long offset = 0;
  bool contains(const BiSequence& s) const;
};

struct RelativeCylinder {
  BiSequence base;
  Word past_word;
  bool contains(const BiSequence& s, std::size_t check_depth = 64) const;
  BiSequence representative() const { return base.with_past_word(past_word); }
};

bool in_local_stable(const BiSequence& xi, const BiSequence& s, std::size_t check_depth = 64);
bool in_local_unstable(const BiSequence& xi, const BiSequence& s, std::size_t check_depth = 64);

// All k^n words of length n over {1..k} in lexicographic order.
std::vector<Word> all_words(int k, int n);
std::vector<BiSequence> local_stable_reps(const BiSequence& xi, int k, int depth);
std::vector<BiSequence> local_unstable_reps(const BiSequence& xi, int k, int depth);

std::string word_str(const Word& w);
Word parse_word(const std::string& text);
Word reversed(Word w);

}  // namespace symblend
