#pragma once

#include <string>

#include "areal/io_geojson.hpp"
#include "areal/units.hpp"

namespace areal {

struct CsvRead {
    UnitCollection units;
    DatasetManifest manifest;
};

/// Point table: header "id,x,y" plus numeric attribute columns; an optional
/// "group" column carries string group labels.  Coordinates are planar;
/// lon/lat data should come in as GeoJSON.
CsvRead read_csv_points(const std::string& path);

/// Writes id,x,y,group?,attributes... in unit order.
void write_csv_points(const UnitCollection& units, const std::string& path);

}  // namespace areal
