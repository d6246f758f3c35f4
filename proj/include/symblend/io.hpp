#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "symblend/fiber.hpp"
#include "symblend/geometry.hpp"

namespace symblend {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Report numbers carry where they came from.
Json computed(double v);
Json measured(double v);
Json bound(double v);

Json to_json(const Vec& v);
Json to_json(const Box& b);
Json to_json(const FiberMap& m);
Json to_json(const SkewProduct& s);

Vec vec_from_json(const Json& j, const std::string& where);
Box box_from_json(const Json& j, const std::string& where);
FiberMap fiber_map_from_json(const Json& j, const std::string& where);
SkewProduct skew_from_json(const Json& j);

Json parse_json_text(const std::string& text, const std::string& source);
Json load_json(const std::string& path);
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

// "lo,hi" per axis, axes separated by ';' (e.g. "0,1" or "-1,1;-1,1").
Box parse_box_arg(const std::string& text);

const Json& field(const Json& j, const char* name, const std::string& where);

}  // namespace symblend
