#pragma once

// JSON descriptions of measures and second coordinates for the command line.
//
//   {"type": "semicircle", "mean": 0, "variance": 1}
//   {"type": "atomic", "points": [-1, 1], "weights": [0.5, 0.5]}
//   {"type": "derivative", "base": {...}, "mass": 1}
//
// An argument starting with '{' is parsed inline, anything else is read as a file.

#include <string>

#include <json.hpp>

#include "freeconv/laws.hpp"
#include "freeconv/typeb.hpp"

namespace freeconv::cli {

nlohmann::json load_spec(const std::string& arg);

MeasureRepr parse_measure(const nlohmann::json& j);
SecondCoordRepr parse_second(const nlohmann::json& j);
StableSpec parse_stable(const nlohmann::json& j);

/// Second coordinate for multiplicative laws: "zero", "rotating" (with the unit-circle first
/// coordinate) or any additive second coordinate of a law on [0, inf).
PsiSecond parse_psi_second(const nlohmann::json& j, const MeasureRepr& first);

}  // namespace freeconv::cli
