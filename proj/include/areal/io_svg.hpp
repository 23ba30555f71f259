#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "areal/moran.hpp"
#include "areal/units.hpp"

namespace areal {

/// Choropleth of LISA classes: one SVG path per polygon, fixed palette
/// (HH red, LL blue, HL orange, LH light blue, NS grey), legend with class
/// counts.  Output bytes are deterministic for fixed input.
void write_choropleth_svg(const UnitCollection& units, const std::vector<LisaClass>& classes,
                          const std::string& path,
                          const nlohmann::json& provenance = nlohmann::json());

/// Choropleth of a continuous attribute in quintile buckets.
void write_choropleth_svg(const UnitCollection& units, const std::vector<double>& values,
                          const std::string& path,
                          const nlohmann::json& provenance = nlohmann::json());

}  // namespace areal
