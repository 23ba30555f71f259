#include "areal/linreg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "areal/error.hpp"
#include "areal/stats.hpp"

namespace areal {

std::string linear_model_name(LinearModel m) {
    switch (m) {
        case LinearModel::OLS: return "ols";
        case LinearModel::SLM: return "slm";
        case LinearModel::SEM: return "sem";
    }
    return "?";
}

int LinearFit::n_parameters() const {
    int k = static_cast<int>(coefficients.size()) + 1;  // + sigma2
    if (rho || lambda) ++k;
    return k;
}

LinearFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names) {
    const auto n = X.rows();
    const auto cols = X.cols();
    if (y.size() != n) throw DataError("response length does not match design rows");
    if (static_cast<Eigen::Index>(names.size()) != cols)
        throw DataError("coefficient name count does not match design columns");
    if (n <= cols) throw DataError("OLS needs n > number of coefficients");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
        // name the columns beyond the numerical rank
        std::string bad;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index t = qr.rank(); t < cols; ++t) {
            if (!bad.empty()) bad += ", ";
            bad += names[static_cast<std::size_t>(perm(t))];
        }
        throw DataError("design matrix is rank deficient; collinear columns: " + bad);
    }

    LinearFit fit;
    fit.model = LinearModel::OLS;
    const Eigen::VectorXd beta = qr.solve(y);
    fit.fitted = X * beta;
    fit.residuals = y - fit.fitted;
    fit.rss = fit.residuals.squaredNorm();

    const double df = static_cast<double>(n - cols);
    fit.sigma2 = fit.rss / df;
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(cols, cols));

    fit.coefficients.resize(static_cast<std::size_t>(cols));
    for (Eigen::Index k = 0; k < cols; ++k) {
        auto& c = fit.coefficients[static_cast<std::size_t>(k)];
        c.name = names[static_cast<std::size_t>(k)];
        c.estimate = beta(k);
        c.std_error = std::sqrt(fit.sigma2 * xtx_inv(k, k));
        c.p_value = c.std_error > 0.0
                        ? student_t_two_sided(c.estimate / c.std_error, df)
                        : 0.0;
    }

    const double nn = static_cast<double>(n);
    const double sigma2_ml = fit.rss / nn;
    fit.log_likelihood = sigma2_ml > 0.0
                             ? -0.5 * nn * (std::log(2.0 * std::numbers::pi) + std::log(sigma2_ml) + 1.0)
                             : std::numeric_limits<double>::infinity();
    fit.aic = -2.0 * fit.log_likelihood + 2.0 * static_cast<double>(cols + 1);

    const double tss = (y.array() - y.mean()).square().sum();
    if (tss > 0.0) {
        const double r2 = 1.0 - fit.rss / tss;
        fit.adj_r2 = 1.0 - (1.0 - r2) * (nn - 1.0) / df;
    }
    return fit;
}

}  // namespace areal
