#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "areal/moran.hpp"
#include "areal/units.hpp"

namespace areal {

struct DatasetManifest {
    std::vector<std::string> sources;
    std::string format;  // "geojson" | "csv-points" | "csv+adjacency"
    std::vector<std::string> attribute_names;
    int n = 0;
    CoordinateSystem coordinate_system = CoordinateSystem::planar;
};

nlohmann::json manifest_to_json(const DatasetManifest& m);

struct GeoJsonRead {
    UnitCollection units;
    DatasetManifest manifest;
    std::vector<std::string> warnings;  // skipped non-numeric properties etc.
};

/// FeatureCollection reader.  Feature id precedence: feature.id, then
/// properties.id.  Numeric properties become attributes; a string property
/// "group" becomes the unit's group label; other non-numeric properties are
/// skipped with a warning.  Coordinates are lon/lat unless the top level
/// carries "crs_planar": true.
GeoJsonRead read_geojson(const std::string& path);

/// Echoes the collection's features with added properties lisa_class
/// (HH/LL/HL/LH/NS), lisa_i, lisa_p.  Geometry coordinates are preserved
/// exactly; feature order is the unit order.  `provenance` (may be null)
/// is embedded at the top level.
void write_lisa_geojson(const UnitCollection& units, const MoranLocalResult& result,
                        const std::string& path,
                        const nlohmann::json& provenance = nlohmann::json());

/// Re-serializes a collection as a FeatureCollection; `extra_properties[i]`
/// (optional) merges into feature i's properties.
nlohmann::json units_to_geojson(const UnitCollection& units,
                                const std::vector<nlohmann::json>* extra_properties = nullptr);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace areal
