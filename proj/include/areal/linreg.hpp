#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace areal {

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double p_value = 1.0;
};

enum class LinearModel { OLS, SLM, SEM };

std::string linear_model_name(LinearModel m);

struct LinearFit {
    LinearModel model = LinearModel::OLS;
    std::vector<Coefficient> coefficients;
    std::optional<double> rho;      // SLM only
    std::optional<double> rho_se;
    std::optional<double> lambda;   // SEM only
    std::optional<double> lambda_se;
    std::optional<double> lr_p;     // LR test against OLS (SLM/SEM)
    double sigma2 = 0.0;            // OLS: rss/(n-p-1); SLM/SEM: ML rss/n
    double log_likelihood = 0.0;
    double aic = 0.0;
    double rss = 0.0;
    std::optional<double> adj_r2;   // OLS only
    Eigen::VectorXd residuals, fitted;

    int n_parameters() const;  // coefficients + sigma2 (+ rho/lambda)
};

/// Least squares via column-pivoted QR; t-based p-values with n-p-1 df;
/// AIC = -2 loglik + 2 (p+2) under the Gaussian likelihood.
LinearFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names);

}  // namespace areal
