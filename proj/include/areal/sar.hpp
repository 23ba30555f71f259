#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "areal/linreg.hpp"
#include "areal/weights.hpp"

namespace areal {

/// log|I - rho W| evaluated from the (real) eigenvalues of W.
/// Accepts a symmetric W, or a row-standardized W built from a symmetric
/// base (adjacency, distance band, inverse distance), whose eigenvalues are
/// real via the similarity transform M_ij = sqrt(w_ij w_ji).
class LogDetProfile {
public:
    static LogDetProfile from_weights(const WeightMatrix& W);

    /// Sum of log(1 - rho e_i); ConfigError outside the valid interval.
    double operator()(double rho) const;

    double lower() const { return lower_; }  // open interval
    double upper() const { return upper_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

private:
    std::vector<double> eigenvalues_;
    double lower_ = 0.0, upper_ = 0.0;
};

/// Concentrated profile of the SLM/SEM likelihood at a fixed spatial
/// coefficient; exposed so the zero-coefficient reduction to OLS is
/// directly checkable.
struct SarProfilePoint {
    Eigen::VectorXd beta;
    double rss = 0.0;
    double sigma2_ml = 0.0;
    double log_likelihood = 0.0;
    Eigen::VectorXd residuals, fitted;
};

SarProfilePoint slm_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const WeightMatrix& W, const LogDetProfile& logdet, double rho);

SarProfilePoint sem_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const WeightMatrix& W, const LogDetProfile& logdet, double lambda);

/// Spatial lag model y = rho W y + X beta + eps by concentrated Gaussian ML.
/// Coefficient standard errors come from a central-difference Hessian of the
/// full log-likelihood; lr_p is the chi-squared(1) tail of the LR statistic
/// against OLS.
LinearFit fit_slm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names);

/// Spatial error model y = X beta + u, u = lambda W u + eps.
LinearFit fit_sem(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names);

/// Sparse product W * v.
Eigen::VectorXd weights_apply(const WeightMatrix& W, const Eigen::VectorXd& v);

}  // namespace areal
