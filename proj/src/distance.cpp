#include "areal/distance.hpp"

#include <algorithm>
#include <cmath>

#include "areal/error.hpp"

namespace areal {

namespace {
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

Metric default_metric(CoordinateSystem cs) {
    return cs == CoordinateSystem::lonlat ? Metric::haversine : Metric::euclidean;
}

void require_metric_match(const UnitCollection& units, Metric metric) {
    const auto cs = units.coordinate_system();
    if (cs == CoordinateSystem::lonlat && metric != Metric::haversine)
        throw ConfigError("lon/lat coordinates require the haversine metric");
    if (cs == CoordinateSystem::planar && metric != Metric::euclidean)
        throw ConfigError("planar coordinates require the euclidean metric");
}

double point_distance(const Point& a, const Point& b, Metric metric) {
    if (metric == Metric::euclidean) {
        const double dx = a.x - b.x, dy = a.y - b.y;
        return std::sqrt(dx * dx + dy * dy);
    }
    // haversine; x = longitude, y = latitude, both in degrees
    const double lat1 = a.y * kDegToRad, lat2 = b.y * kDegToRad;
    const double dlat = (b.y - a.y) * kDegToRad;
    const double dlon = (b.x - a.x) * kDegToRad;
    const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

DistanceMatrix pairwise_distance(const UnitCollection& units, Metric metric) {
    require_metric_match(units, metric);
    const int n = units.size();
    DistanceMatrix d(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dij = point_distance(units[i].centroid, units[j].centroid, metric);
            d.at(i, j) = dij;
            d.at(j, i) = dij;
        }
    }
    return d;
}

std::vector<double> distance_row(const UnitCollection& units, int i, Metric metric) {
    const int n = units.size();
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        if (j != i) row[static_cast<std::size_t>(j)] =
            point_distance(units[i].centroid, units[j].centroid, metric);
    }
    return row;
}

double quantile_distance(const UnitCollection& units, double q, Metric metric) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("distance quantile must lie in (0,1)");
    require_metric_match(units, metric);
    const int n = units.size();
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dists.push_back(point_distance(units[i].centroid, units[j].centroid, metric));
    std::sort(dists.begin(), dists.end());
    const auto m = static_cast<double>(dists.size());
    auto idx = static_cast<std::size_t>(std::ceil(q * m)) - 1;
    if (idx >= dists.size()) idx = dists.size() - 1;
    return dists[idx];
}

}  // namespace areal
