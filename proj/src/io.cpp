#include "symblend/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace symblend {

namespace {

Json tagged(double v, const char* kind) {
  Json j;
  j["value"] = v;
  j["kind"] = kind;
  return j;
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace

Json computed(double v) { return tagged(v, "computed"); }
Json measured(double v) { return tagged(v, "measured"); }
Json bound(double v) { return tagged(v, "bound"); }

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(where + ": missing field '" + name + "'");
  return *it;
}

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Box& b) {
  Json j;
  j["lo"] = to_json(b.lo);
  j["hi"] = to_json(b.hi);
  return j;
}

Json to_json(const FiberMap& m) {
  Json j;
  switch (m.kind()) {
    case MapKind::Affine:
      j["kind"] = "affine";
      j["a"] = to_json(m.a());
      j["b"] = to_json(m.b());
      break;
    case MapKind::PiecewiseLinear:
      j["kind"] = "pl";
      j["x"] = m.knots_x();
      j["y"] = m.knots_y();
      break;
    default: throw std::invalid_argument("user-supplied fiber maps cannot be serialized");
  }
  return j;
}

Json to_json(const SkewProduct& s) {
  Json j;
  j["k"] = s.k();
  j["depth"] = s.depth();
  j["alpha"] = s.alpha();
  j["nu"] = s.nu();
  j["D"] = to_json(s.D());
  Json entries = Json::array();
  for (std::size_t c = 0; c < s.table().size(); ++c) {
    Json e;
    e["word"] = s.central_word(c);
    const Json m = to_json(s.table()[c]);
    for (auto& [key, val] : m.items()) e[key] = val;
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

Vec vec_from_json(const Json& j, const std::string& where) {
  auto xs = numbers(j, where);
  if (xs.empty() || xs.size() > 3) throw ParseError(where + ": dimension must be 1, 2 or 3");
  Vec v(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<int>(i)) = xs[i];
  return v;
}

Box box_from_json(const Json& j, const std::string& where) {
  Vec lo = vec_from_json(field(j, "lo", where), where + ".lo");
  Vec hi = vec_from_json(field(j, "hi", where), where + ".hi");
  if (lo.size() != hi.size()) throw ParseError(where + ": lo and hi differ in dimension");
  Box b(lo, hi);
  if (b.empty()) throw ParseError(where + ": lo exceeds hi");
  return b;
}

FiberMap fiber_map_from_json(const Json& j, const std::string& where) {
  std::string kind = j.value("kind", std::string("affine"));
  try {
    if (kind == "affine")
      return FiberMap::affine(vec_from_json(field(j, "a", where), where + ".a"), vec_from_json(field(j, "b", where), where + ".b"));
    if (kind == "pl") return FiberMap::piecewise_linear(numbers(field(j, "x", where), where + ".x"), numbers(field(j, "y", where), where + ".y"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ".kind: unknown fiber map kind '" + kind + "' (expected affine or pl)");
}

SkewProduct skew_from_json(const Json& j) {
  const std::string w = "skew";
  const Json& kf = field(j, "k", w);
  if (!kf.is_number_integer()) throw ParseError("skew.k: expected an integer");
  int k = kf.get<int>();
  int depth = j.value("depth", 0);
  double alpha = j.value("alpha", 1.0), nu = j.value("nu", 0.5);
  Box D = box_from_json(field(j, "D", w), "skew.D");
  const Json& entries = field(j, "entries", w);
  if (!entries.is_array()) throw ParseError("skew.entries: expected an array");
  std::size_t n = 1;
  for (int i = 0; i < 2 * depth + 1; ++i) n *= static_cast<std::size_t>(k);
  std::vector<std::optional<FiberMap>> table(n);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "skew.entries[" + std::to_string(i) + "]";
    Word word;
    if (entries[i].contains("word")) {
      for (double x : numbers(entries[i]["word"], where + ".word")) word.push_back(static_cast<int>(x));
    } else if (depth == 0) {
      word = {static_cast<int>(i) + 1};
    } else {
      throw ParseError(where + ": missing field 'word'");
    }
    if (word.size() != static_cast<std::size_t>(2 * depth + 1))
      throw ParseError(where + ".word: expected length " + std::to_string(2 * depth + 1));
    std::size_t c = 0;
    for (int s : word) {
      if (s < 1 || s > k) throw ParseError(where + ".word: symbol " + std::to_string(s) + " outside 1.." + std::to_string(k));
      c = c * static_cast<std::size_t>(k) + static_cast<std::size_t>(s - 1);
    }
    if (table[c]) throw ParseError(where + ".word: duplicate entry " + word_str(word));
    table[c] = fiber_map_from_json(entries[i], where);
  }
  std::vector<FiberMap> maps;
  for (std::size_t c = 0; c < n; ++c) {
    if (!table[c]) throw ParseError("skew.entries: missing entry for table index " + std::to_string(c));
    maps.push_back(*table[c]);
  }
  try {
    return {k, depth, std::move(maps), D, alpha, nu};
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("skew: ") + e.what());
  }
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

Box parse_box_arg(const std::string& text) {
  std::vector<double> lo, hi;
  std::stringstream axes(text);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    auto comma = axis.find(',');
    if (comma == std::string::npos) throw ParseError("box '" + text + "': each axis needs lo,hi");
    try {
      lo.push_back(std::stod(axis.substr(0, comma)));
      hi.push_back(std::stod(axis.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("box '" + text + "': bad number in axis '" + axis + "'");
    }
  }
  if (lo.empty() || lo.size() > 3) throw ParseError("box '" + text + "': dimension must be 1, 2 or 3");
  Vec l(static_cast<int>(lo.size())), h(static_cast<int>(hi.size()));
  for (std::size_t i = 0; i < lo.size(); ++i) {
    l(static_cast<int>(i)) = lo[i];
    h(static_cast<int>(i)) = hi[i];
  }
  Box b(l, h);
  if (b.empty()) throw ParseError("box '" + text + "': lo exceeds hi");
  return b;
}

}  // namespace symblend
