#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "areal/gwr.hpp"
#include "areal/linreg.hpp"
#include "areal/moran.hpp"

namespace areal {

using AnyFit = std::variant<LinearFit, GwrFit>;

std::string fit_model_name(const AnyFit& fit);
const Eigen::VectorXd& fit_residuals(const AnyFit& fit);
const Eigen::VectorXd& fit_fitted(const AnyFit& fit);

/// Permutation Moran test on a residual vector.
MoranGlobalResult residual_moran(const Eigen::VectorXd& residuals, const WeightMatrix& W,
                                 int nperm, std::uint64_t seed);

struct ComparisonRow {
    std::string model;
    std::optional<double> r2;
    std::string r2_label;  // "adj", "quasi", or "-"
    double aic = 0.0;
    double rss = 0.0;
    MoranGlobalResult moran;
};

struct ModelComparison {
    std::vector<ComparisonRow> rows;
};

/// One row per fit: R^2 (adjusted for OLS, quasi for GWR, none for SLM/SEM),
/// AIC, RSS, and the permutation Moran test on the fit's residuals.  All
/// fits must come from the same (X, y).
ModelComparison compare_models(const std::vector<AnyFit>& fits, const WeightMatrix& W, int nperm,
                               std::uint64_t seed);

}  // namespace areal
