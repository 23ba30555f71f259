#include "areal/units.hpp"

#include <cmath>

#include "areal/error.hpp"

namespace areal {

UnitCollection::UnitCollection(std::vector<SpatialUnit> units, CoordinateSystem cs)
    : units_(std::move(units)), cs_(cs) {
    if (units_.size() < 2) throw DataError("a unit collection needs at least 2 units");
    for (std::size_t i = 0; i < units_.size(); ++i) {
        const auto& u = units_[i];
        if (u.id.empty()) throw DataError("unit at position " + std::to_string(i) + " has an empty id");
        auto [it, inserted] = index_.emplace(u.id, static_cast<int>(i));
        if (!inserted) throw DataError("duplicate unit id: " + u.id);
        for (const auto& ring : u.polygon) {
            if (ring.size() < 4) throw DataError("unit " + u.id + ": polygon ring has fewer than 4 vertices");
            if (ring.front().x != ring.back().x || ring.front().y != ring.back().y)
                throw DataError("unit " + u.id + ": polygon ring is not closed");
        }
    }
}

int UnitCollection::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

bool UnitCollection::has_polygons() const {
    for (const auto& u : units_)
        if (u.polygon.empty()) return false;
    return !units_.empty();
}

std::vector<Point> UnitCollection::centroids() const {
    std::vector<Point> pts;
    pts.reserve(units_.size());
    for (const auto& u : units_) pts.push_back(u.centroid);
    return pts;
}

AttributeVector UnitCollection::attribute(const std::string& name) const {
    AttributeVector out;
    out.name = name;
    out.values.reserve(units_.size());
    for (const auto& u : units_) {
        auto it = u.attributes.find(name);
        if (it == u.attributes.end())
            throw DataError("unit " + u.id + " is missing attribute '" + name + "'");
        if (!std::isfinite(it->second))
            throw DataError("unit " + u.id + ": attribute '" + name + "' is not finite");
        out.values.push_back(it->second);
    }
    return out;
}

std::vector<std::string> UnitCollection::attribute_names() const {
    std::vector<std::string> names;
    if (units_.empty()) return names;
    for (const auto& [name, _] : units_[0].attributes) {
        bool everywhere = true;
        for (const auto& u : units_) {
            if (!u.attributes.count(name)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) names.push_back(name);
    }
    return names;
}

double ring_area(const Ring& ring) {
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        a += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    return a / 2.0;
}

Point polygon_centroid(const std::vector<Ring>& rings) {
    double area_sum = 0.0, cx = 0.0, cy = 0.0;
    for (const auto& ring : rings) {
        double a = 0.0, x = 0.0, y = 0.0;
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const double cross = ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
            a += cross;
            x += (ring[i].x + ring[i + 1].x) * cross;
            y += (ring[i].y + ring[i + 1].y) * cross;
        }
        a /= 2.0;
        if (a != 0.0) {
            cx += x / 6.0;  // still signed-area weighted
            cy += y / 6.0;
            area_sum += a;
        }
    }
    if (area_sum == 0.0) throw DataError("polygon has zero area; centroid undefined");
    return Point{cx / area_sum, cy / area_sum};
}

}  // namespace areal
