#pragma once

#include "opuc/exponent_set.hpp"
#include "opuc/measure.hpp"
#include "opuc/numeric.hpp"

#include <json.hpp>

#include <string>

namespace opuc {

/// Grid used when a weight_function document names a density generator
/// instead of listing samples.
inline constexpr std::size_t kDefaultDensityGrid = 4096;

/// Parses a measure-spec document:
///   {"kind": "alpha_defined", "generator": {"name": "zhedanov", "p": 0.5, "theta0": 1.0}}
///   {"kind": "atomic", "atoms": [[angle, weight], ...]}
///   {"kind": "weight_function", "samples": [...]}
///   {"kind": "weight_function", "generator": {"name": "poisson", "r": 0.5}, "grid": 4096}
/// Throws SpecError with code spec_malformed, spec_unknown_generator or
/// spec_out_of_range and a JSON-pointer field.
MeasureSpec parse_measure_spec(const std::string& document);
MeasureSpec parse_measure_spec(const char* document);
MeasureSpec parse_measure_spec(const nlohmann::json& document);
MeasureSpec load_measure_spec(const std::string& path);

nlohmann::json to_json(const GeneratorSpec& g);
nlohmann::json to_json(const MeasureSpec& spec);

/// Integer when it fits in int64, decimal string otherwise.
nlohmann::json index_to_json(const Index& x);

/// {"intervals": [[a, b], ...], "provenance": "..."}
nlohmann::json to_json(const ExponentSet& set);

/// [re, im] as decimal strings at full working precision.
nlohmann::json complex_to_json(const Complex& z, int digits = 40);

}  // namespace opuc
