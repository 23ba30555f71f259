#include "areal/io_geojson.hpp"

#include <fstream>

#include "areal/error.hpp"

namespace areal {

using nlohmann::json;

json manifest_to_json(const DatasetManifest& m) {
    return json{{"sources", m.sources},
                {"format", m.format},
                {"attributes", m.attribute_names},
                {"n", m.n},
                {"coordinate_system",
                 m.coordinate_system == CoordinateSystem::lonlat ? "lonlat" : "planar"}};
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

namespace {

Ring parse_ring(const json& arr, const std::string& id) {
    Ring ring;
    for (const auto& pt : arr) {
        if (!pt.is_array() || pt.size() < 2)
            throw DataError("feature " + id + ": malformed coordinate");
        ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    if (ring.size() < 4 || ring.front().x != ring.back().x || ring.front().y != ring.back().y)
        throw DataError("feature " + id + ": polygon ring must be closed with >= 4 vertices");
    return ring;
}

std::string id_from_feature(const json& feature, std::size_t position) {
    const json* id = nullptr;
    if (feature.contains("id")) id = &feature.at("id");
    else if (feature.contains("properties") && feature.at("properties").contains("id"))
        id = &feature.at("properties").at("id");
    if (!id)
        throw DataError("feature at position " + std::to_string(position) + " has no id");
    if (id->is_string()) return id->get<std::string>();
    if (id->is_number_integer()) return std::to_string(id->get<long long>());
    return id->dump();
}

}  // namespace

GeoJsonRead read_geojson(const std::string& path) {
    const json doc = read_json_file(path);
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw DataError(path + ": expected a GeoJSON FeatureCollection");
    const bool planar = doc.value("crs_planar", false);

    GeoJsonRead out;
    std::vector<SpatialUnit> units;
    const auto& features = doc.value("features", json::array());
    for (std::size_t f = 0; f < features.size(); ++f) {
        const auto& feature = features[f];
        SpatialUnit u;
        u.id = id_from_feature(feature, f);

        if (!feature.contains("geometry") || feature.at("geometry").is_null())
            throw DataError("feature " + u.id + " has no geometry");
        const auto& geom = feature.at("geometry");
        const std::string type = geom.value("type", "");
        const auto& coords = geom.at("coordinates");
        if (type == "Point") {
            u.centroid = {coords[0].get<double>(), coords[1].get<double>()};
        } else if (type == "Polygon") {
            for (const auto& ring : coords) u.polygon.push_back(parse_ring(ring, u.id));
            u.centroid = polygon_centroid(u.polygon);
        } else if (type == "MultiPolygon") {
            for (const auto& part : coords)
                for (const auto& ring : part) u.polygon.push_back(parse_ring(ring, u.id));
            u.centroid = polygon_centroid(u.polygon);
        } else {
            throw DataError("feature " + u.id + ": unsupported geometry type '" + type + "'");
        }

        const json props = feature.value("properties", json::object());
        for (const auto& [key, value] : props.items()) {
            if (key == "id") continue;
            if (value.is_number()) {
                u.attributes[key] = value.get<double>();
            } else if (key == "group" && value.is_string()) {
                u.group = value.get<std::string>();
            } else {
                out.warnings.push_back("feature " + u.id + ": skipped non-numeric property '" +
                                       key + "'");
            }
        }
        units.push_back(std::move(u));
    }

    out.units = UnitCollection(std::move(units),
                               planar ? CoordinateSystem::planar : CoordinateSystem::lonlat);
    out.manifest.sources = {path};
    out.manifest.format = "geojson";
    out.manifest.attribute_names = out.units.attribute_names();
    out.manifest.n = out.units.size();
    out.manifest.coordinate_system = out.units.coordinate_system();
    return out;
}

namespace {

json ring_to_json(const Ring& ring) {
    json arr = json::array();
    for (const auto& p : ring) arr.push_back({p.x, p.y});
    return arr;
}

// Rings regroup into polygon parts by winding: a counter-clockwise ring
// (positive shoelace area) opens a part, clockwise rings are its holes.
json geometry_to_json(const SpatialUnit& u) {
    if (u.polygon.empty())
        return json{{"type", "Point"}, {"coordinates", {u.centroid.x, u.centroid.y}}};
    std::vector<json> parts;
    for (const auto& ring : u.polygon) {
        if (parts.empty() || ring_area(ring) > 0.0)
            parts.push_back(json::array({ring_to_json(ring)}));
        else
            parts.back().push_back(ring_to_json(ring));
    }
    if (parts.size() == 1) return json{{"type", "Polygon"}, {"coordinates", parts[0]}};
    json coords = json::array();
    for (auto& p : parts) coords.push_back(std::move(p));
    return json{{"type", "MultiPolygon"}, {"coordinates", coords}};
}

}  // namespace

json units_to_geojson(const UnitCollection& units, const std::vector<json>* extra_properties) {
    json features = json::array();
    for (int i = 0; i < units.size(); ++i) {
        const auto& u = units[i];
        json props = json::object();
        for (const auto& [k, v] : u.attributes) props[k] = v;
        if (!u.group.empty()) props["group"] = u.group;
        if (extra_properties)
            for (const auto& [k, v] : (*extra_properties)[static_cast<std::size_t>(i)].items())
                props[k] = v;
        features.push_back(json{{"type", "Feature"},
                                {"id", u.id},
                                {"geometry", geometry_to_json(u)},
                                {"properties", props}});
    }
    json doc{{"type", "FeatureCollection"}, {"features", features}};
    if (units.coordinate_system() == CoordinateSystem::planar) doc["crs_planar"] = true;
    return doc;
}

void write_lisa_geojson(const UnitCollection& units, const MoranLocalResult& result,
                        const std::string& path, const json& provenance) {
    if (static_cast<int>(result.local_I.size()) != units.size() ||
        static_cast<int>(result.p_values.size()) != units.size() ||
        static_cast<int>(result.classes.size()) != units.size())
        throw DataError("LISA result length does not match unit count");
    std::vector<json> extra(static_cast<std::size_t>(units.size()));
    for (int i = 0; i < units.size(); ++i) {
        extra[static_cast<std::size_t>(i)] =
            json{{"lisa_class", lisa_code(result.classes[static_cast<std::size_t>(i)])},
                 {"lisa_i", result.local_I[static_cast<std::size_t>(i)]},
                 {"lisa_p", result.p_values[static_cast<std::size_t>(i)]}};
    }
    json doc = units_to_geojson(units, &extra);
    if (!provenance.is_null()) doc["provenance"] = provenance;
    write_json_file(doc, path);
}

}  // namespace areal
