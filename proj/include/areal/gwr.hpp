#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "areal/distance.hpp"
#include "areal/stats.hpp"
#include "areal/units.hpp"

namespace areal {

enum class GwrKernel { gaussian, bisquare };

std::string gwr_kernel_name(GwrKernel k);

/// gaussian: exp(-d^2 / (2 b^2)); bisquare: (1 - (d/b)^2)^2 for d < b, else 0.
double gwr_kernel(double d, double bandwidth, GwrKernel kind);

enum class BandwidthCriterion { loocv, aicc };

struct GwrFit {
    Eigen::MatrixXd local_coefficients;  // n x (p+1)
    std::vector<double> local_r2;        // kernel-weighted R^2 at each location
    double bandwidth = 0.0;
    GwrKernel kernel = GwrKernel::bisquare;
    double effective_params = 0.0;       // trace of the hat matrix
    double quasi_r2 = 0.0;               // 1 - RSS/TSS
    double aic = 0.0;
    double rss = 0.0;
    double log_likelihood = 0.0;
    std::vector<std::string> names;
    std::vector<FiveNumber> coefficient_summary;  // per coefficient column
    Eigen::VectorXd residuals, fitted;
};

/// Golden-section search over [min nonzero pairwise distance, max pairwise
/// distance] minimizing leave-one-out CV error or AICc.  Deterministic.
double select_bandwidth(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<Point>& coords, GwrKernel kernel,
                        BandwidthCriterion criterion, Metric metric = Metric::euclidean);

/// Kernel-weighted local least squares at every location.  Pass nullopt as
/// the bandwidth to select one automatically with the given criterion.
GwrFit fit_gwr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const std::vector<Point>& coords, const std::vector<std::string>& names,
               GwrKernel kernel, std::optional<double> bandwidth,
               BandwidthCriterion criterion = BandwidthCriterion::loocv,
               Metric metric = Metric::euclidean);

}  // namespace areal
