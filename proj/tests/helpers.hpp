#pragma once

// Shared fixtures and independent oracles for the test suites.  Oracles are
// deliberately written as naive double loops so they cannot share a bug with
// the library implementations they check.

#include <cmath>
#include <string>
#include <vector>

#include "areal/units.hpp"
#include "areal/weights.hpp"

namespace testutil {

inline areal::UnitCollection units_from_points(const std::vector<areal::Point>& pts,
                                               areal::CoordinateSystem cs =
                                                   areal::CoordinateSystem::planar) {
    std::vector<areal::SpatialUnit> units;
    units.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        areal::SpatialUnit u;
        u.id = "u" + std::to_string(i);
        u.centroid = pts[i];
        units.push_back(std::move(u));
    }
    return areal::UnitCollection(std::move(units), cs);
}

/// Brute-force evaluation of the global Moran formula over a dense copy of
/// W: (n/S0) * sum_ij w_ij (y_i-ybar)(y_j-ybar) / sum_i (y_i-ybar)^2.
inline double moran_brute_force(const std::vector<double>& y, const areal::WeightMatrix& W) {
    const int n = W.n();
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double s0 = 0.0, num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        den += (y[static_cast<std::size_t>(i)] - ybar) * (y[static_cast<std::size_t>(i)] - ybar);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = W.at(i, j);
            s0 += w;
            num += w * (y[static_cast<std::size_t>(i)] - ybar) *
                   (y[static_cast<std::size_t>(j)] - ybar);
        }
    }
    return (static_cast<double>(n) / s0) * num / den;
}

/// Local Moran by direct evaluation of the formula at one location.
inline double local_moran_brute_force(const std::vector<double>& y, const areal::WeightMatrix& W,
                                      int i) {
    const int n = W.n();
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double den = 0.0, lag = 0.0;
    for (int j = 0; j < n; ++j) {
        den += (y[static_cast<std::size_t>(j)] - ybar) * (y[static_cast<std::size_t>(j)] - ybar);
        if (j != i) lag += W.at(i, j) * (y[static_cast<std::size_t>(j)] - ybar);
    }
    return static_cast<double>(n) * (y[static_cast<std::size_t>(i)] - ybar) * lag / den;
}

struct WeightSums {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
};

/// Recomputes S0 = sum w_ij, S1 = 1/2 sum_ij (w_ij+w_ji)^2 and
/// S2 = sum_i (row_i + col_i)^2 from scratch over the dense matrix.
inline WeightSums weight_sums_brute_force(const areal::WeightMatrix& W) {
    const int n = W.n();
    WeightSums s;
    std::vector<double> row(static_cast<std::size_t>(n), 0.0), col(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = W.at(i, j);
            const double pair = w + W.at(j, i);
            s.s0 += w;
            s.s1 += 0.5 * pair * pair;
            row[static_cast<std::size_t>(i)] += w;
            col[static_cast<std::size_t>(j)] += w;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double rc = row[static_cast<std::size_t>(i)] + col[static_cast<std::size_t>(i)];
        s.s2 += rc * rc;
    }
    return s;
}

}  // namespace testutil
