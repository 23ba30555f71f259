#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "areal/units.hpp"

namespace areal {

struct DesignSpec {
    std::string response;
    std::vector<std::string> predictors;
    bool log_response = false;
    /// Cases-per-capita scaling: response becomes response/population *
    /// prevalence_per before any log transform.
    std::optional<double> prevalence_per;
    /// Attribute holding the population divisor (used with prevalence_per).
    std::string population = "population";
};

struct Design {
    Eigen::MatrixXd X;  // leading intercept column, then predictors in spec order
    Eigen::VectorXd y;
    std::vector<std::string> names;    // "(Intercept)", then predictor names
    std::vector<std::string> dropped;  // zero-variance predictors removed
};

Design build_design(const UnitCollection& units, const DesignSpec& spec);

}  // namespace areal
