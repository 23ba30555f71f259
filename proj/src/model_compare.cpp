#include "areal/model_compare.hpp"

#include <cmath>

#include "areal/error.hpp"

namespace areal {

std::string fit_model_name(const AnyFit& fit) {
    if (std::holds_alternative<GwrFit>(fit)) return "gwr";
    return linear_model_name(std::get<LinearFit>(fit).model);
}

const Eigen::VectorXd& fit_residuals(const AnyFit& fit) {
    if (std::holds_alternative<GwrFit>(fit)) return std::get<GwrFit>(fit).residuals;
    return std::get<LinearFit>(fit).residuals;
}

const Eigen::VectorXd& fit_fitted(const AnyFit& fit) {
    if (std::holds_alternative<GwrFit>(fit)) return std::get<GwrFit>(fit).fitted;
    return std::get<LinearFit>(fit).fitted;
}

MoranGlobalResult residual_moran(const Eigen::VectorXd& residuals, const WeightMatrix& W,
                                 int nperm, std::uint64_t seed) {
    AttributeVector v;
    v.name = "residuals";
    v.values.assign(residuals.data(), residuals.data() + residuals.size());
    return moran_permutation(v, W, nperm, seed, Alternative::two_sided);
}

ModelComparison compare_models(const std::vector<AnyFit>& fits, const WeightMatrix& W, int nperm,
                               std::uint64_t seed) {
    if (fits.size() < 2) throw ConfigError("model comparison needs at least 2 fits");

    // every fit must reconstruct the same y = fitted + residuals
    const Eigen::VectorXd y0 = fit_fitted(fits[0]) + fit_residuals(fits[0]);
    for (std::size_t k = 1; k < fits.size(); ++k) {
        const Eigen::VectorXd yk = fit_fitted(fits[k]) + fit_residuals(fits[k]);
        if (yk.size() != y0.size() ||
            (yk - y0).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, y0.cwiseAbs().maxCoeff()))
            throw DataError("fits were not produced from the same (X, y)");
    }

    ModelComparison out;
    out.rows.reserve(fits.size());
    for (const auto& fit : fits) {
        ComparisonRow row;
        row.model = fit_model_name(fit);
        if (std::holds_alternative<GwrFit>(fit)) {
            const auto& g = std::get<GwrFit>(fit);
            row.r2 = g.quasi_r2;
            row.r2_label = "quasi";
            row.aic = g.aic;
            row.rss = g.rss;
        } else {
            const auto& l = std::get<LinearFit>(fit);
            if (l.model == LinearModel::OLS && l.adj_r2) {
                row.r2 = *l.adj_r2;
                row.r2_label = "adj";
            } else {
                row.r2_label = "-";
            }
            row.aic = l.aic;
            row.rss = l.rss;
        }
        row.moran = residual_moran(fit_residuals(fit), W, nperm, seed);
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace areal
