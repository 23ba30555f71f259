#pragma once

#include <map>
#include <string>
#include <vector>

namespace areal {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed ring: first vertex equals last, at least 4 vertices.
using Ring = std::vector<Point>;

enum class CoordinateSystem { planar, lonlat };

/// One areal unit (a ward, a lattice cell, ...).
struct SpatialUnit {
    std::string id;
    Point centroid;
    std::vector<Ring> polygon;  // empty when the unit has no boundary geometry
    std::map<std::string, double> attributes;
    std::string group;  // empty when unlabeled
};

struct AttributeVector {
    std::string name;
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
};

/// Ordered set of spatial units.  The order is stable and defines matrix
/// row/column order for every downstream computation.
class UnitCollection {
public:
    UnitCollection() = default;
    UnitCollection(std::vector<SpatialUnit> units, CoordinateSystem cs);

    int size() const { return static_cast<int>(units_.size()); }
    const SpatialUnit& operator[](int i) const { return units_[static_cast<std::size_t>(i)]; }
    const std::vector<SpatialUnit>& units() const { return units_; }
    CoordinateSystem coordinate_system() const { return cs_; }

    /// Position of an id, or -1 when absent.
    int index_of(const std::string& id) const;

    bool has_polygons() const;
    std::vector<Point> centroids() const;

    /// Gathers one attribute across all units; DataError when a unit lacks
    /// it or holds a non-finite value.
    AttributeVector attribute(const std::string& name) const;

    /// Names present on every unit.
    std::vector<std::string> attribute_names() const;

private:
    std::vector<SpatialUnit> units_;
    std::map<std::string, int> index_;
    CoordinateSystem cs_ = CoordinateSystem::planar;
};

/// Signed shoelace area of one ring.
double ring_area(const Ring& ring);

/// Area-weighted centroid over all rings (holes carry negative signed area).
Point polygon_centroid(const std::vector<Ring>& rings);

}  // namespace areal
