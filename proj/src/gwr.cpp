#include "areal/gwr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "areal/error.hpp"
#include "areal/parallel.hpp"

namespace areal {

std::string gwr_kernel_name(GwrKernel k) {
    return k == GwrKernel::gaussian ? "gaussian" : "bisquare";
}

double gwr_kernel(double d, double bandwidth, GwrKernel kind) {
    if (!(bandwidth > 0.0)) throw ConfigError("kernel bandwidth must be positive");
    if (d < 0.0) throw ConfigError("kernel distance must be nonnegative");
    if (kind == GwrKernel::gaussian) return std::exp(-d * d / (2.0 * bandwidth * bandwidth));
    if (d >= bandwidth) return 0.0;
    const double u = d / bandwidth;
    const double v = 1.0 - u * u;
    return v * v;
}

namespace {

struct LocalFit {
    Eigen::VectorXd beta;
    double leverage = 0.0;
    double fitted = 0.0;
    double local_r2 = 0.0;
    bool singular = false;
    double min_feasible = 0.0;  // suggested bandwidth when singular
};

// Weighted least squares centred on location i.  skip_self drops
// observation i (leave-one-out prediction).
LocalFit local_wls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const std::vector<Point>& coords, int i, double bandwidth, GwrKernel kernel,
                   Metric metric, bool skip_self) {
    const int n = static_cast<int>(X.rows());
    const auto cols = X.cols();
    LocalFit out;

    std::vector<int> idx;
    std::vector<double> w;
    std::vector<double> dists(static_cast<std::size_t>(n));
    idx.reserve(static_cast<std::size_t>(n));
    w.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double d = point_distance(coords[static_cast<std::size_t>(i)],
                                        coords[static_cast<std::size_t>(j)], metric);
        dists[static_cast<std::size_t>(j)] = d;
        if (skip_self && j == i) continue;
        const double wj = gwr_kernel(d, bandwidth, kernel);
        if (wj > 0.0) {
            idx.push_back(j);
            w.push_back(wj);
        }
    }
    if (static_cast<Eigen::Index>(idx.size()) < cols) {
        out.singular = true;
        std::sort(dists.begin(), dists.end());
        out.min_feasible = dists[std::min<std::size_t>(dists.size() - 1,
                                                       static_cast<std::size_t>(cols))];
        return out;
    }

    Eigen::MatrixXd Xw(static_cast<Eigen::Index>(idx.size()), cols);
    Eigen::VectorXd yw(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t) {
        const double s = std::sqrt(w[t]);
        Xw.row(static_cast<Eigen::Index>(t)) = s * X.row(idx[t]);
        yw(static_cast<Eigen::Index>(t)) = s * y(idx[t]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
        out.singular = true;
        std::sort(dists.begin(), dists.end());
        out.min_feasible = dists[std::min<std::size_t>(dists.size() - 1,
                                                       static_cast<std::size_t>(cols) + 1)];
        return out;
    }
    out.beta = qr.solve(yw);
    out.fitted = X.row(i).dot(out.beta);

    if (!skip_self) {
        // leverage S_ii = w_ii x_i' (X'WX)^-1 x_i with w_ii = kernel(0) = 1
        const Eigen::MatrixXd A = Xw.transpose() * Xw;
        const Eigen::VectorXd u = A.ldlt().solve(X.row(i).transpose());
        out.leverage = X.row(i).dot(u);

        double wsum = 0.0, wy = 0.0;
        for (std::size_t t = 0; t < idx.size(); ++t) {
            wsum += w[t];
            wy += w[t] * y(idx[t]);
        }
        const double ybar_w = wy / wsum;
        double tss_w = 0.0, rss_w = 0.0;
        for (std::size_t t = 0; t < idx.size(); ++t) {
            const double e_fit = y(idx[t]) - X.row(idx[t]).dot(out.beta);
            const double e_mean = y(idx[t]) - ybar_w;
            rss_w += w[t] * e_fit * e_fit;
            tss_w += w[t] * e_mean * e_mean;
        }
        out.local_r2 = tss_w > 0.0 ? std::clamp(1.0 - rss_w / tss_w, 0.0, 1.0) : 0.0;
    }
    return out;
}

void check_gwr_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<Point>& coords) {
    if (y.size() != X.rows()) throw DataError("response length does not match design rows");
    if (static_cast<Eigen::Index>(coords.size()) != X.rows())
        throw DataError("coordinate count does not match design rows");
    if (X.rows() <= X.cols()) throw DataError("GWR needs n > number of coefficients");
}

double cv_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                const std::vector<Point>& coords, GwrKernel kernel, Metric metric,
                double bandwidth) {
    const int n = static_cast<int>(X.rows());
    std::vector<double> errors(static_cast<std::size_t>(n), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(n), 0);
    parallel_for(0, n, [&](int i) {
        const auto f = local_wls(X, y, coords, i, bandwidth, kernel, metric, true);
        if (f.singular) {
            failed[static_cast<std::size_t>(i)] = 1;
            return;
        }
        const double e = y(i) - f.fitted;
        errors[static_cast<std::size_t>(i)] = e * e;
    });
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        if (failed[static_cast<std::size_t>(i)]) return std::numeric_limits<double>::infinity();
        s += errors[static_cast<std::size_t>(i)];
    }
    return s;
}

double aicc_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<Point>& coords, GwrKernel kernel, Metric metric,
                  double bandwidth) {
    const int n = static_cast<int>(X.rows());
    std::vector<double> res2(static_cast<std::size_t>(n), 0.0);
    std::vector<double> lev(static_cast<std::size_t>(n), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(n), 0);
    parallel_for(0, n, [&](int i) {
        const auto f = local_wls(X, y, coords, i, bandwidth, kernel, metric, false);
        if (f.singular) {
            failed[static_cast<std::size_t>(i)] = 1;
            return;
        }
        const double e = y(i) - f.fitted;
        res2[static_cast<std::size_t>(i)] = e * e;
        lev[static_cast<std::size_t>(i)] = f.leverage;
    });
    double rss = 0.0, tr = 0.0;
    for (int i = 0; i < n; ++i) {
        if (failed[static_cast<std::size_t>(i)]) return std::numeric_limits<double>::infinity();
        rss += res2[static_cast<std::size_t>(i)];
        tr += lev[static_cast<std::size_t>(i)];
    }
    const double nn = static_cast<double>(n);
    if (nn - 2.0 - tr <= 0.0 || !(rss > 0.0)) return std::numeric_limits<double>::infinity();
    return nn * std::log(rss / nn) + nn * std::log(2.0 * std::numbers::pi) + nn +
           nn * (nn + tr) / (nn - 2.0 - tr);
}

}  // namespace

double select_bandwidth(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<Point>& coords, GwrKernel kernel,
                        BandwidthCriterion criterion, Metric metric) {
    check_gwr_inputs(X, y, coords);
    const int n = static_cast<int>(X.rows());
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = point_distance(coords[static_cast<std::size_t>(i)],
                                            coords[static_cast<std::size_t>(j)], metric);
            if (d > 0.0) dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    if (!(dmax > 0.0) || !std::isfinite(dmin))
        throw DataError("bandwidth search interval is degenerate (coincident coordinates)");

    auto score = [&](double b) {
        return criterion == BandwidthCriterion::loocv
                   ? cv_score(X, y, coords, kernel, metric, b)
                   : aicc_score(X, y, coords, kernel, metric, b);
    };

    // coarse scan, then golden section in the bracketing cell
    constexpr int kGrid = 16;
    constexpr int kGoldenIters = 40;
    double best_b = dmax, best_s = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= kGrid; ++g) {
        const double b = dmin + (dmax - dmin) * g / kGrid;
        const double s = score(b);
        if (s < best_s) {
            best_s = s;
            best_b = b;
        }
    }
    if (!std::isfinite(best_s))
        throw DataError("no feasible bandwidth in the search interval");
    double a = std::max(dmin, best_b - (dmax - dmin) / kGrid);
    double b = std::min(dmax, best_b + (dmax - dmin) / kGrid);
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = score(x1), f2 = score(x2);
    for (int it = 0; it < kGoldenIters; ++it) {
        if (f1 > f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = score(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = score(x1);
        }
    }
    return (a + b) / 2.0;
}

GwrFit fit_gwr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const std::vector<Point>& coords, const std::vector<std::string>& names,
               GwrKernel kernel, std::optional<double> bandwidth, BandwidthCriterion criterion,
               Metric metric) {
    check_gwr_inputs(X, y, coords);
    if (static_cast<Eigen::Index>(names.size()) != X.cols())
        throw DataError("coefficient name count does not match design columns");
    if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");

    GwrFit fit;
    fit.kernel = kernel;
    fit.names = names;
    fit.bandwidth = bandwidth ? *bandwidth
                              : select_bandwidth(X, y, coords, kernel, criterion, metric);

    const int n = static_cast<int>(X.rows());
    const auto cols = X.cols();
    fit.local_coefficients.resize(n, cols);
    fit.local_r2.assign(static_cast<std::size_t>(n), 0.0);
    fit.fitted.resize(n);
    Eigen::VectorXd leverage(n);
    std::vector<std::string> failures(static_cast<std::size_t>(n));

    parallel_for(0, n, [&](int i) {
        const auto f = local_wls(X, y, coords, i, fit.bandwidth, kernel, metric, false);
        if (f.singular) {
            failures[static_cast<std::size_t>(i)] =
                "local design is rank deficient at location " + std::to_string(i) +
                "; use a bandwidth above " + std::to_string(f.min_feasible);
            return;
        }
        fit.local_coefficients.row(i) = f.beta.transpose();
        fit.local_r2[static_cast<std::size_t>(i)] = f.local_r2;
        fit.fitted(i) = f.fitted;
        leverage(i) = f.leverage;
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw DataError(msg);

    fit.residuals = y - fit.fitted;
    fit.rss = fit.residuals.squaredNorm();
    fit.effective_params = leverage.sum();

    const double nn = static_cast<double>(n);
    const double tss = (y.array() - y.mean()).square().sum();
    fit.quasi_r2 = tss > 0.0 ? 1.0 - fit.rss / tss : 0.0;
    const double sigma2_ml = fit.rss / nn;
    fit.log_likelihood = sigma2_ml > 0.0
                             ? -0.5 * nn * (std::log(2.0 * std::numbers::pi) +
                                            std::log(sigma2_ml) + 1.0)
                             : std::numeric_limits<double>::infinity();
    fit.aic = -2.0 * fit.log_likelihood + 2.0 * (fit.effective_params + 1.0);

    fit.coefficient_summary.reserve(static_cast<std::size_t>(cols));
    for (Eigen::Index k = 0; k < cols; ++k) {
        std::vector<double> col(fit.local_coefficients.col(k).data(),
                                fit.local_coefficients.col(k).data() + n);
        fit.coefficient_summary.push_back(five_number_summary(std::move(col)));
    }
    return fit;
}

}  // namespace areal
