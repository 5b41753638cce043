#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqcrys/charts.hpp"
#include "sqcrys/minimizer.hpp"

namespace sqcrys {

using json = nlohmann::json;

// non-finite doubles become "inf", "-inf", "nan"
json num(double x);
double num_from(const json& j);

json to_json(const Potential& pot);
// accepts a serialized potential or a builder spec {"builder": "exv3" | "hard_square" | "hermite", ...}
Potential potential_from_json(const json& j);
// named presets: "hard-sqrt2", "exv3", "exv3-truncated"
Potential potential_preset(const std::string& name);

json to_json(const Configuration& X);
Configuration configuration_from_json(const json& j);
std::string configuration_to_csv(const Configuration& X);
Configuration configuration_from_csv(const std::string& text);

json to_json(const ConditionReport& r);
json to_json(const SpectrumEntry& e);
json to_json(const ScaleResult& s);
json to_json(const RunResult& r);
json to_json(const BoundsRow& r);
std::string bounds_csv(const std::vector<BoundsRow>& rows);
json to_json(const CoverVerdict& v);
std::string decomposition_csv(const SublatticeDecomposition& dec);
json to_json(const BondGraph& G);
json to_json(const RigidityVerdict& v);
json to_json(const AngleBounds& b);
json to_json(const JohnVerdict& v);
json to_json(const InequalityReport& r);

// FNV-1a 64 of the compact dump (object keys are sorted)
std::uint64_t spec_hash(const json& spec);
std::string hex64(std::uint64_t h);

}  // namespace sqcrys
