#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "areal/units.hpp"
#include "areal/weights.hpp"

namespace areal {

struct Lattice {
    UnitCollection units;
    WeightMatrix W;  // raw 0-1 contiguity
    int rows = 0, cols = 0;
};

/// Regular grid: centroids at integer points, unit-square polygons, ids
/// "r{row}c{col}", row-major order.
Lattice make_lattice(int rows, int cols, Contiguity contiguity);

/// Dense copy of a weight matrix (guarded at n <= 10000).
Eigen::MatrixXd weights_to_dense(const WeightMatrix& W);

/// y = (I - rho W)^-1 (X beta + eps), eps_i = sigma * normal(i) from
/// CounterRng(seed).  Requires a row-standardized W and |rho| < 1.
AttributeVector simulate_sar_lag(const WeightMatrix& W, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& beta, double rho, double sigma,
                                 std::uint64_t seed);

/// y = X beta + (I - lambda W)^-1 eps, same noise stream as simulate_sar_lag.
AttributeVector simulate_sar_error(const WeightMatrix& W, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& beta, double lambda, double sigma,
                                   std::uint64_t seed);

using CoefficientFn = std::function<double(double, double)>;

struct GwrSurfaceData {
    Eigen::MatrixXd X;  // leading intercept column
    Eigen::VectorXd y;
};

/// y_i = beta0(u_i,v_i) + sum_k beta_k(u_i,v_i) x_ik + eps_i with iid
/// standard-normal predictors (derived seed 1) and noise (derived seed 2).
GwrSurfaceData simulate_gwr_surface(const std::vector<Point>& coords,
                                    const std::vector<CoefficientFn>& beta_fns, double sigma,
                                    std::uint64_t seed);

/// Design matrix with an intercept column and p iid standard-normal columns;
/// column k>0 draws counters (k-1)*n .. k*n-1.
Eigen::MatrixXd gaussian_design(int n, int p, std::uint64_t seed);

// Canonical Moran fixtures.
AttributeVector checkerboard(int rows, int cols);  // +1/-1 by (row+col) parity
AttributeVector gradient(int rows, int cols);      // value = row index

struct BlockExtent {
    int row0 = 0, col0 = 0, rows = 0, cols = 0;
};

/// Zero background with one rectangle raised to `level`.
AttributeVector planted_block(int rows, int cols, const BlockExtent& extent, double level);

AttributeVector iid_noise(int n, double sigma, std::uint64_t seed);

}  // namespace areal
