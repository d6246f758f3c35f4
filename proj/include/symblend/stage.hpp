#pragma once

#include <string>
#include <vector>

#include "symblend/io.hpp"

namespace symblend {

struct Stage {
  std::string name;
  bool passed = false;
  std::string detail;
  Json data = Json::object();

  Json to_json() const {
    Json j;
    j["name"] = name;
    j["passed"] = passed;
    if (!detail.empty()) j["detail"] = detail;
    if (!data.empty()) j["data"] = data;
    return j;
  }
};

struct StagedReport {
  std::vector<Stage> stages;

  Stage& add(std::string name, bool passed, std::string detail = {}, Json data = Json::object()) {
    stages.push_back({std::move(name), passed, std::move(detail), std::move(data)});
    return stages.back();
  }
  bool passed() const {
    if (stages.empty()) return false;
    for (const auto& s : stages)
      if (!s.passed) return false;
    return true;
  }
  std::string failed_stage() const {
    for (const auto& s : stages)
      if (!s.passed) return s.name;
    return {};
  }
  const Stage* find(const std::string& name) const {
    for (const auto& s : stages)
      if (s.name == name) return &s;
    return nullptr;
  }
  Json stages_json() const {
    Json a = Json::array();
    for (const auto& s : stages) a.push_back(s.to_json());
    return a;
  }
};

}  // namespace symblend
