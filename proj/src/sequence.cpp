#include "symblend/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace symblend {

namespace {

Ray drop(const Ray& r, std::size_t n) {
  if (n <= r.transient.size()) return {Word(r.transient.begin() + static_cast<long>(n), r.transient.end()), r.period};
  std::size_t rot = (n - r.transient.size()) % r.period.size();
  Word p(r.period.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = r.period[(j + rot) % p.size()];
  return {{}, p};
}

Word prefix(const Ray& r, std::size_t n) {
  Word w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = r.at(j);
  return w;
}

Word split_list(const std::string& s) {
  Word w;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad symbol '" + tok + "'");
    w.push_back(v);
    tok.clear();
  };
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') flush();
    else tok.push_back(c);
  }
  flush();
  return w;
}

std::size_t ray_horizon(const Ray& a, const Ray& b) {
  return std::max(a.transient.size(), b.transient.size()) + std::lcm(a.period.size(), b.period.size());
}

std::optional<std::size_t> ray_mismatch(const Ray& a, const Ray& b) {
  std::size_t h = ray_horizon(a, b);
  for (std::size_t j = 0; j < h; ++j)
    if (a.at(j) != b.at(j)) return j;
  return std::nullopt;
}

}  // namespace

Ray BiSequence::canonical(Ray r) {
  if (r.period.empty()) throw std::invalid_argument("empty period");
  const std::size_t L = r.period.size();
  for (std::size_t d = 1; d <= L; ++d) {
    if (L % d) continue;
    bool ok = true;
    for (std::size_t j = d; j < L && ok; ++j) ok = r.period[j] == r.period[j - d];
    if (ok) {
      r.period.resize(d);
      break;
    }
  }
  while (!r.transient.empty() && r.transient.back() == r.period.back()) {
    r.transient.pop_back();
    std::rotate(r.period.rbegin(), r.period.rbegin() + 1, r.period.rend());
  }
  return r;
}

Ray BiSequence::from_words(Word front, const Ray& rest) {
  front.insert(front.end(), rest.transient.begin(), rest.transient.end());
  return canonical({std::move(front), rest.period});
}

BiSequence::BiSequence() : BiSequence({}, {1}, {}, {1}) {}

BiSequence::BiSequence(Word past_transient, Word past_period, Word future_transient, Word future_period) {
  for (const Word* w : {&past_transient, &past_period, &future_transient, &future_period})
    for (int s : *w)
      if (s < 1) throw std::invalid_argument("symbols must be >= 1");
  past_ = canonical({reversed(std::move(past_transient)), reversed(std::move(past_period))});
  future_ = canonical({std::move(future_transient), std::move(future_period)});
}

BiSequence BiSequence::constant(int s) { return {{}, {s}, {}, {s}}; }

BiSequence BiSequence::periodic(const Word& period) {
  // Past continues the period backwards: ξ_{-1} = period.back().
  return {{}, period, {}, period};
}

BiSequence BiSequence::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) || c == ' ') t.push_back(c);
  auto semi = t.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("sequence text needs ';': " + text);
  auto half = [&](std::string h) {
    auto l = h.find('('), r = h.rfind(')'), bar = h.find('|');
    if (l == std::string::npos || r == std::string::npos || bar == std::string::npos || !(l < bar && bar < r))
      throw std::invalid_argument("sequence half must look like (w|p): " + h);
    return std::pair{split_list(h.substr(l + 1, bar - l - 1)), split_list(h.substr(bar + 1, r - bar - 1))};
  };
  auto [pt, pp] = half(t.substr(0, semi));
  auto [ft, fp] = half(t.substr(semi + 1));
  if (pp.empty() || fp.empty()) throw std::invalid_argument("periods must be nonempty: " + text);
  return {pt, pp, ft, fp};
}

int BiSequence::max_symbol() const {
  int m = 0;
  for (const Ray* r : {&past_, &future_}) {
    for (int s : r->transient) m = std::max(m, s);
    for (int s : r->period) m = std::max(m, s);
  }
  return m;
}

std::string BiSequence::str() const {
  return "(" + word_str(reversed(past_.transient)) + "|" + word_str(reversed(past_.period)) + ");(" +
         word_str(future_.transient) + "|" + word_str(future_.period) + ")";
}

BiSequence BiSequence::shift(long n) const {
  BiSequence out = *this;
  if (n > 0) {
    auto un = static_cast<std::size_t>(n);
    out.past_ = from_words(reversed(prefix(future_, un)), past_);
    out.future_ = canonical(drop(future_, un));
  } else if (n < 0) {
    auto um = static_cast<std::size_t>(-n);
    out.future_ = from_words(reversed(prefix(past_, um)), future_);
    out.past_ = canonical(drop(past_, um));
  }
  return out;
}

BiSequence BiSequence::conjugate() const {
  BiSequence out = *this;
  out.future_ = from_words({future_.at(0)}, past_);
  out.past_ = canonical(drop(future_, 1));
  return out;
}

BiSequence BiSequence::with_past_word(const Word& w) const {
  BiSequence out = *this;
  out.past_ = from_words(reversed(w), drop(past_, w.size()));
  return out;
}

BiSequence BiSequence::with_future_word(const Word& w) const {
  BiSequence out = *this;
  Word front{future_.at(0)};
  front.insert(front.end(), w.begin(), w.end());
  out.future_ = from_words(front, drop(future_, w.size() + 1));
  return out;
}

BiSequence BiSequence::with_word(long offset, const Word& w) const {
  const long end = offset + static_cast<long>(w.size());  // exclusive
  BiSequence out = *this;
  if (end > 0) {
    auto n = static_cast<std::size_t>(end);
    Word f = prefix(future_, n);
    for (long i = std::max(offset, 0L); i < end; ++i) f[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i - offset)];
    out.future_ = from_words(f, drop(future_, n));
  }
  if (offset < 0) {
    auto n = static_cast<std::size_t>(-offset);
    Word p = prefix(past_, n);  // p[j] = ξ_{-1-j}
    for (long i = offset; i < std::min(end, 0L); ++i) p[static_cast<std::size_t>(-1 - i)] = w[static_cast<std::size_t>(i - offset)];
    out.past_ = from_words(p, drop(past_, n));
  }
  return out;
}

Word BiSequence::segment(long from, long to) const {
  Word w;
  for (long i = from; i <= to; ++i) w.push_back((*this)[i]);
  return w;
}

std::size_t BiSequence::horizon_with(const BiSequence& o) const {
  return std::max(ray_horizon(past_, o.past_), ray_horizon(future_, o.future_));
}

bool BiSequence::operator<(const BiSequence& o) const {
  return std::tie(past_.transient, past_.period, future_.transient, future_.period) <
         std::tie(o.past_.transient, o.past_.period, o.future_.transient, o.future_.period);
}

std::optional<long> first_disagreement(const BiSequence& a, const BiSequence& b) {
  std::optional<long> best;
  if (auto f = ray_mismatch(a.future_ray(), b.future_ray())) best = static_cast<long>(*f);
  if (auto p = ray_mismatch(a.past_ray(), b.past_ray())) {
    long l = static_cast<long>(*p) + 1;
    if (!best || l < *best) best = l;
  }
  return best;
}

double metric(const BiSequence& a, const BiSequence& b, double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in (0,1)");
  auto l = first_disagreement(a, b);
  return l ? std::pow(nu, static_cast<double>(*l)) : 0.0;
}

bool Cylinder::contains(const BiSequence& s) const {
  for (std::size_t j = 0; j < word.size(); ++j)
    if (s[offset + static_cast<long>(j)] != word[j]) return false;
  return true;
}

bool RelativeCylinder::contains(const BiSequence& s, std::size_t) const {
  if (!in_local_stable(base, s)) return false;
  const long n = static_cast<long>(past_word.size());
  for (long j = 1; j <= n; ++j)
    if (s[-j] != past_word[static_cast<std::size_t>(n - j)]) return false;
  return true;
}

bool in_local_stable(const BiSequence& xi, const BiSequence& s, std::size_t) {
  return xi.future_ray() == s.future_ray();
}

bool in_local_unstable(const BiSequence& xi, const BiSequence& s, std::size_t) {
  return xi[0] == s[0] && xi.past_ray() == s.past_ray();
}

std::vector<Word> all_words(int k, int n) {
  std::vector<Word> out;
  Word w(static_cast<std::size_t>(n), 1);
  while (true) {
    out.push_back(w);
    int j = n - 1;
    while (j >= 0 && w[static_cast<std::size_t>(j)] == k) w[static_cast<std::size_t>(j--)] = 1;
    if (j < 0) break;
    ++w[static_cast<std::size_t>(j)];
  }
  return out;
}

std::vector<BiSequence> local_stable_reps(const BiSequence& xi, int k, int depth) {
  std::vector<BiSequence> out;
  for (const auto& w : all_words(k, depth)) out.push_back(xi.with_past_word(w));
  return out;
}

std::vector<BiSequence> local_unstable_reps(const BiSequence& xi, int k, int depth) {
  std::vector<BiSequence> out;
  for (const auto& w : all_words(k, depth)) out.push_back(xi.with_future_word(w));
  return out;
}

std::string word_str(const Word& w) {
  std::string s;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(w[j]);
  }
  return s;
}

Word parse_word(const std::string& text) { return split_list(text); }

Word reversed(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace symblend
