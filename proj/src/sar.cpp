#include "areal/sar.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <numbers>

#include "areal/error.hpp"
#include "areal/stats.hpp"

namespace areal {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

Eigen::MatrixXd dense_from(const WeightMatrix& W) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(W.n(), W.n());
    for (int i = 0; i < W.n(); ++i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        for (std::size_t t = 0; t < cols.size(); ++t) M(i, cols[t]) = ws[t];
    }
    return M;
}

// Deterministic 1-D maximizer: coarse grid scan, then golden section inside
// the bracketing cell.  f may return -inf.
double maximize_1d(const std::function<double(double)>& f, double lo, double hi) {
    constexpr int kGrid = 64;
    constexpr int kGoldenIters = 80;
    const double span = hi - lo;
    double best_x = lo, best_f = -std::numeric_limits<double>::infinity();
    for (int g = 0; g <= kGrid; ++g) {
        const double x = lo + span * g / kGrid;
        const double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - span / kGrid);
    double b = std::min(hi, best_x + span / kGrid);
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < kGoldenIters && (b - a) > 1e-8; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return (a + b) / 2.0;
}

// Central-difference Hessian with steps 1e-5 relative to each parameter.
Eigen::MatrixXd numerical_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& theta) {
    const auto k = theta.size();
    Eigen::VectorXd h(k);
    for (Eigen::Index i = 0; i < k; ++i) h(i) = 1e-5 * std::max(1.0, std::fabs(theta(i)));
    Eigen::MatrixXd H(k, k);
    const double f0 = f(theta);
    for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(i) += h(i);
        tm(i) -= h(i);
        H(i, i) = (f(tp) - 2.0 * f0 + f(tm)) / (h(i) * h(i));
        for (Eigen::Index j = i + 1; j < k; ++j) {
            Eigen::VectorXd tpp = theta, tpm = theta, tmp = theta, tmm = theta;
            tpp(i) += h(i); tpp(j) += h(j);
            tpm(i) += h(i); tpm(j) -= h(j);
            tmp(i) -= h(i); tmp(j) += h(j);
            tmm(i) -= h(i); tmm(j) -= h(j);
            H(i, j) = H(j, i) = (f(tpp) - f(tpm) - f(tmp) + f(tmm)) / (4.0 * h(i) * h(j));
        }
    }
    return H;
}

Eigen::VectorXd hessian_std_errors(const std::function<double(const Eigen::VectorXd&)>& loglik,
                                   const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd H = numerical_hessian(loglik, theta);
    const Eigen::MatrixXd info = -H;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    Eigen::VectorXd se = Eigen::VectorXd::Constant(theta.size(), std::numeric_limits<double>::quiet_NaN());
    if (!lu.isInvertible()) return se;
    const Eigen::MatrixXd cov = lu.inverse();
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        se(i) = cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : std::numeric_limits<double>::quiet_NaN();
    return se;
}

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names) {
    if (X.rows() != W.n()) throw DataError("design row count does not match the weight matrix");
    if (y.size() != X.rows()) throw DataError("response length does not match design rows");
    if (static_cast<Eigen::Index>(names.size()) != X.cols())
        throw DataError("coefficient name count does not match design columns");
}

void rank_check(const Eigen::MatrixXd& X, const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        std::string bad;
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index t = qr.rank(); t < X.cols(); ++t) {
            if (!bad.empty()) bad += ", ";
            bad += names[static_cast<std::size_t>(perm(t))];
        }
        throw DataError("design matrix is rank deficient; collinear columns: " + bad);
    }
}

}  // namespace

LogDetProfile LogDetProfile::from_weights(const WeightMatrix& W) {
    if (W.n() > 10000) throw ConfigError("dense eigendecomposition is guarded at n <= 10000");

    Eigen::MatrixXd M;
    if (W.value_symmetric(1e-12)) {
        M = dense_from(W);
    } else if (W.standardized() && W.builder().kind != WeightKind::knn && W.pattern_symmetric()) {
        // W = D^-1 A with symmetric A: similar to the symmetric matrix
        // M_ij = sqrt(w_ij w_ji), so the spectrum is real.
        M = dense_from(W);
        for (int i = 0; i < W.n(); ++i)
            for (int j = i + 1; j < W.n(); ++j) {
                const double s = std::sqrt(M(i, j) * M(j, i));
                M(i, j) = s;
                M(j, i) = s;
            }
    } else {
        throw DataError(
            "SAR log-determinant needs real eigenvalues: use a symmetric weight matrix, or "
            "row-standardize a symmetric builder (adjacency, distance band, inverse distance); "
            "k-NN weights must be symmetrized first");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DataError("eigendecomposition of W failed");

    LogDetProfile p;
    p.eigenvalues_.assign(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    const double e_min = p.eigenvalues_.front();
    const double e_max = p.eigenvalues_.back();
    if (!(e_min < 0.0 && e_max > 0.0))
        throw DataError("weight matrix spectrum does not straddle zero; SAR interval undefined");
    p.lower_ = 1.0 / e_min;
    p.upper_ = 1.0 / e_max;
    return p;
}

double LogDetProfile::operator()(double rho) const {
    if (!(rho > lower_ && rho < upper_))
        throw ConfigError("spatial coefficient outside the valid interval (" +
                          std::to_string(lower_) + ", " + std::to_string(upper_) + ")");
    double s = 0.0;
    for (double e : eigenvalues_) s += std::log1p(-rho * e);
    return s;
}

Eigen::VectorXd weights_apply(const WeightMatrix& W, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(W.n());
    for (int i = 0; i < W.n(); ++i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        double s = 0.0;
        for (std::size_t t = 0; t < cols.size(); ++t) s += ws[t] * v(cols[t]);
        out(i) = s;
    }
    return out;
}

SarProfilePoint slm_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const WeightMatrix& W, const LogDetProfile& logdet, double rho) {
    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd Wy = weights_apply(W, y);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    SarProfilePoint p;
    p.beta = qr.solve(y - rho * Wy);
    p.residuals = y - rho * Wy - X * p.beta;
    p.fitted = y - p.residuals;
    p.rss = p.residuals.squaredNorm();
    p.sigma2_ml = p.rss / n;
    p.log_likelihood = -0.5 * n * (kLogTwoPi + std::log(p.sigma2_ml) + 1.0) + logdet(rho);
    return p;
}

SarProfilePoint sem_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const WeightMatrix& W, const LogDetProfile& logdet, double lambda) {
    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd Wy = weights_apply(W, y);
    Eigen::MatrixXd WX(X.rows(), X.cols());
    for (Eigen::Index k = 0; k < X.cols(); ++k) WX.col(k) = weights_apply(W, X.col(k));
    const Eigen::MatrixXd Xs = X - lambda * WX;
    const Eigen::VectorXd ys = y - lambda * Wy;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    SarProfilePoint p;
    p.beta = qr.solve(ys);
    p.residuals = ys - Xs * p.beta;  // filtered innovations
    p.fitted = y - p.residuals;
    p.rss = p.residuals.squaredNorm();
    p.sigma2_ml = p.rss / n;
    p.log_likelihood = -0.5 * n * (kLogTwoPi + std::log(p.sigma2_ml) + 1.0) + logdet(lambda);
    return p;
}

namespace {

struct SarCommon {
    double coef = 0.0;           // rho or lambda
    double coef_se = 0.0;
    double lr_p = 1.0;
    SarProfilePoint at_opt;
    Eigen::VectorXd beta_se;     // per coefficient
};

// Shared driver: maximize the concentrated likelihood, then differentiate
// the full likelihood for standard errors.
SarCommon sar_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names, bool lag_model) {
    check_shapes(X, y, W, names);
    rank_check(X, names);
    const auto logdet = LogDetProfile::from_weights(W);
    const double span = logdet.upper() - logdet.lower();
    const double lo = logdet.lower() + 1e-8 * span;
    const double hi = logdet.upper() - 1e-8 * span;

    const Eigen::VectorXd Wy = weights_apply(W, y);

    std::function<double(double)> profile_loglik;
    if (lag_model) {
        // rss(rho) is quadratic: precompute from two OLS residual vectors
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        const Eigen::VectorXd e0 = y - X * qr.solve(y).eval();
        const Eigen::VectorXd ed = Wy - X * qr.solve(Wy).eval();
        const double a = e0.squaredNorm(), b = e0.dot(ed), c = ed.squaredNorm();
        const double n = static_cast<double>(X.rows());
        profile_loglik = [=, &logdet](double rho) {
            const double rss = a - 2.0 * rho * b + rho * rho * c;
            if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
            return -0.5 * n * (kLogTwoPi + std::log(rss / n) + 1.0) + logdet(rho);
        };
    } else {
        Eigen::MatrixXd WX(X.rows(), X.cols());
        for (Eigen::Index k = 0; k < X.cols(); ++k) WX.col(k) = weights_apply(W, X.col(k));
        const Eigen::MatrixXd G0 = X.transpose() * X;
        const Eigen::MatrixXd G1 = X.transpose() * WX;
        const Eigen::MatrixXd G2 = WX.transpose() * WX;
        const Eigen::VectorXd h0 = X.transpose() * y;
        const Eigen::VectorXd h1 = X.transpose() * Wy;
        const Eigen::VectorXd h1b = WX.transpose() * y;
        const Eigen::VectorXd h2 = WX.transpose() * Wy;
        const double q0 = y.squaredNorm(), q1 = y.dot(Wy), q2 = Wy.squaredNorm();
        const double n = static_cast<double>(X.rows());
        profile_loglik = [=, &logdet](double lam) {
            const Eigen::MatrixXd A = G0 - lam * (G1 + G1.transpose()) + lam * lam * G2;
            const Eigen::VectorXd rhs = h0 - lam * (h1 + h1b) + lam * lam * h2;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
            if (ldlt.info() != Eigen::Success)
                return -std::numeric_limits<double>::infinity();
            const Eigen::VectorXd beta = ldlt.solve(rhs);
            const double yy = q0 - 2.0 * lam * q1 + lam * lam * q2;
            const double rss = yy - beta.dot(rhs);
            if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
            return -0.5 * n * (kLogTwoPi + std::log(rss / n) + 1.0) + logdet(lam);
        };
    }

    SarCommon out;
    out.coef = maximize_1d(profile_loglik, lo, hi);
    const char* coef_name = lag_model ? "rho" : "lambda";
    if (out.coef - lo < 1e-5 * span || hi - out.coef < 1e-5 * span)
        throw DataError(std::string(coef_name) + " at boundary of the valid interval");

    out.at_opt = lag_model ? slm_profile(X, y, W, logdet, out.coef)
                           : sem_profile(X, y, W, logdet, out.coef);

    // LR against OLS = the profile at coefficient 0
    const double loglik0 = profile_loglik(0.0);
    const double lr = std::max(0.0, 2.0 * (out.at_opt.log_likelihood - loglik0));
    out.lr_p = chi2_tail_1df(lr);

    // full-likelihood Hessian over (coef, beta..., sigma2)
    const auto cols = X.cols();
    Eigen::MatrixXd WX;
    if (!lag_model) {
        WX.resize(X.rows(), cols);
        for (Eigen::Index k = 0; k < cols; ++k) WX.col(k) = weights_apply(W, X.col(k));
    }
    const double n = static_cast<double>(X.rows());
    auto full_loglik = [&](const Eigen::VectorXd& theta) {
        const double coef = theta(0);
        const double sigma2 = theta(cols + 1);
        if (!(sigma2 > 0.0) || !(coef > logdet.lower() && coef < logdet.upper()))
            return -std::numeric_limits<double>::infinity();
        const Eigen::VectorXd beta = theta.segment(1, cols);
        Eigen::VectorXd eps;
        if (lag_model)
            eps = y - coef * Wy - X * beta;
        else
            eps = (y - coef * Wy) - (X - coef * WX) * beta;
        return -0.5 * n * (kLogTwoPi + std::log(sigma2)) + logdet(coef) -
               eps.squaredNorm() / (2.0 * sigma2);
    };
    Eigen::VectorXd theta(cols + 2);
    theta(0) = out.coef;
    theta.segment(1, cols) = out.at_opt.beta;
    theta(cols + 1) = out.at_opt.sigma2_ml;
    const Eigen::VectorXd se = hessian_std_errors(full_loglik, theta);
    out.coef_se = se(0);
    out.beta_se = se.segment(1, cols);
    return out;
}

LinearFit assemble_sar_fit(const Eigen::MatrixXd& X, const std::vector<std::string>& names,
                           const SarCommon& c, bool lag_model) {
    LinearFit fit;
    fit.model = lag_model ? LinearModel::SLM : LinearModel::SEM;
    if (lag_model) {
        fit.rho = c.coef;
        fit.rho_se = c.coef_se;
    } else {
        fit.lambda = c.coef;
        fit.lambda_se = c.coef_se;
    }
    fit.lr_p = c.lr_p;
    fit.coefficients.resize(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        auto& cf = fit.coefficients[static_cast<std::size_t>(k)];
        cf.name = names[static_cast<std::size_t>(k)];
        cf.estimate = c.at_opt.beta(k);
        cf.std_error = c.beta_se(k);
        cf.p_value = std::isfinite(cf.std_error) && cf.std_error > 0.0
                         ? normal_p_value(cf.estimate / cf.std_error, Alternative::two_sided)
                         : std::numeric_limits<double>::quiet_NaN();
    }
    fit.sigma2 = c.at_opt.sigma2_ml;
    fit.log_likelihood = c.at_opt.log_likelihood;
    fit.rss = c.at_opt.rss;
    fit.residuals = c.at_opt.residuals;
    fit.fitted = c.at_opt.fitted;
    fit.aic = -2.0 * fit.log_likelihood + 2.0 * static_cast<double>(fit.n_parameters());
    return fit;
}

}  // namespace

LinearFit fit_slm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names) {
    return assemble_sar_fit(X, names, sar_fit(X, y, W, names, true), true);
}

LinearFit fit_sem(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightMatrix& W,
                  const std::vector<std::string>& names) {
    return assemble_sar_fit(X, names, sar_fit(X, y, W, names, false), false);
}

}  // namespace areal
