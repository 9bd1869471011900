// Copyright 2026 The primalkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "primalkit/core/json_format.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "primalkit/core/lp_format.h"

namespace primalkit {
namespace {

using nlohmann::json;

json TermsToJson(const std::vector<Term>& terms) {
  json out = json::array();
  for (const Term& t : terms) out.push_back({t.var, t.coef});
  return out;
}

std::vector<Term> TermsFromJson(const json& j) {
  std::vector<Term> terms;
  for (const json& t : j) {
    if (!t.is_array() || t.size() != 2) {
      throw StructuralError("term must be a [var, coef] pair");
    }
    terms.push_back({t[0].get<int>(), t[1].get<double>()});
  }
  return terms;
}

json BoundToJson(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

double BoundFromJson(const json& j, double infinite) {
  return j.is_null() ? infinite : j.get<double>();
}

ConstraintSense SenseFromString(const std::string& s) {
  if (s == "<=") return ConstraintSense::kLessEqual;
  if (s == ">=") return ConstraintSense::kGreaterEqual;
  if (s == "=") return ConstraintSense::kEqual;
  throw StructuralError("unknown constraint sense '" + s + "'");
}

Integrality IntegralityFromString(const std::string& s) {
  if (s == "continuous") return Integrality::kContinuous;
  if (s == "integer") return Integrality::kInteger;
  if (s == "binary") return Integrality::kBinary;
  throw StructuralError("unknown variable type '" + s + "'");
}

}  // namespace

std::string WriteInstanceJson(const MilpInstance& inst) {
  json j;
  j["name"] = inst.name;
  j["negated_from_max"] = inst.negated_from_max;
  j["objective"] = {{"offset", inst.objective.offset},
                    {"terms", TermsToJson(inst.objective.terms)}};
  json vars = json::array();
  for (const VariableDef& v : inst.variables) {
    vars.push_back({{"name", v.name},
                    {"lower", BoundToJson(v.lower)},
                    {"upper", BoundToJson(v.upper)},
                    {"type", std::string(ToString(v.integrality))}});
  }
  j["variables"] = std::move(vars);
  json rows = json::array();
  for (const LinearConstraint& c : inst.constraints) {
    json row = {{"name", c.name},
                {"sense", std::string(ToString(c.sense))},
                {"rhs", c.rhs},
                {"terms", TermsToJson(c.terms)}};
    if (c.sos1_group) row["sos1_group"] = *c.sos1_group;
    rows.push_back(std::move(row));
  }
  j["constraints"] = std::move(rows);
  return j.dump(1) + "\n";
}

MilpInstance ParseInstanceJson(std::string_view text) {
  MilpInstance inst;
  try {
    const json j = json::parse(text);
    inst.name = j.value("name", "");
    inst.negated_from_max = j.value("negated_from_max", false);
    const json& obj = j.at("objective");
    inst.objective.offset = obj.value("offset", 0.0);
    inst.objective.terms = TermsFromJson(obj.at("terms"));
    for (const json& v : j.at("variables")) {
      inst.variables.push_back(
          {v.at("name").get<std::string>(),
           BoundFromJson(v.at("lower"), -kInfinity),
           BoundFromJson(v.at("upper"), kInfinity),
           IntegralityFromString(v.value("type", "continuous"))});
    }
    for (const json& c : j.at("constraints")) {
      LinearConstraint row;
      row.name = c.at("name").get<std::string>();
      row.sense = SenseFromString(c.value("sense", "<="));
      row.rhs = c.value("rhs", 0.0);
      row.terms = TermsFromJson(c.at("terms"));
      if (c.contains("sos1_group")) {
        row.sos1_group = c["sos1_group"].get<std::string>();
      }
      inst.constraints.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw StructuralError(std::string("instance JSON: ") + e.what());
  }
  inst.Validate();
  return inst;
}

namespace {

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool IsJsonPath(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json";
}

}  // namespace

MilpInstance ReadInstanceFile(const std::string& path) {
  if (!IsJsonPath(path)) return ReadLpFileFromPath(path);
  MilpInstance inst = ParseInstanceJson(ReadAll(path));
  if (inst.name.empty()) inst.name = std::filesystem::path(path).stem().string();
  return inst;
}

void WriteInstanceFile(const MilpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << (IsJsonPath(path) ? WriteInstanceJson(inst) : WriteLpFile(inst));
}

}  // namespace primalkit
