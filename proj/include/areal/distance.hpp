#pragma once

#include <vector>

#include "areal/units.hpp"

namespace areal {

enum class Metric { euclidean, haversine };

/// Euclidean for planar coordinates, haversine (degrees in, km out,
/// Earth radius 6371 km) for lon/lat.
Metric default_metric(CoordinateSystem cs);

/// ConfigError unless the metric matches the collection's coordinate system.
void require_metric_match(const UnitCollection& units, Metric metric);

double point_distance(const Point& a, const Point& b, Metric metric);

/// Dense symmetric distance table.
class DistanceMatrix {
public:
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}
    double operator()(int i, int j) const {
        return d_[static_cast<std::size_t>(i) * n_ + j];
    }
    double& at(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    int n() const { return n_; }

private:
    int n_;
    std::vector<double> d_;
};

DistanceMatrix pairwise_distance(const UnitCollection& units, Metric metric);

/// Distances from unit i to every unit (d[i] = 0).
std::vector<double> distance_row(const UnitCollection& units, int i, Metric metric);

/// Empirical quantile of the n(n-1)/2 off-diagonal distances, lower
/// interpolation: sorted[ceil(q*m) - 1].
double quantile_distance(const UnitCollection& units, double q, Metric metric);

}  // namespace areal
