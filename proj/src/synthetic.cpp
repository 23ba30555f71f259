#include "areal/synthetic.hpp"

#include <cmath>
#include <string>

#include "areal/error.hpp"
#include "areal/rng.hpp"

namespace areal {

Lattice make_lattice(int rows, int cols, Contiguity contiguity) {
    if (rows < 2 || cols < 2) throw ConfigError("lattice needs rows >= 2 and cols >= 2");
    std::vector<SpatialUnit> units;
    units.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            SpatialUnit u;
            u.id = "r" + std::to_string(r) + "c" + std::to_string(c);
            u.centroid = {static_cast<double>(c), static_cast<double>(r)};
            const double x0 = c - 0.5, x1 = c + 0.5, y0 = r - 0.5, y1 = r + 0.5;
            u.polygon = {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}};
            units.push_back(std::move(u));
        }
    }

    std::vector<WeightMatrix::Triplet> entries;
    auto idx = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (contiguity == Contiguity::rook && dr != 0 && dc != 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    entries.push_back({idx(r, c), idx(rr, cc), 1.0});
                }
            }
        }
    }
    WeightBuilderInfo info{WeightKind::adjacency, 0, 0.0, 0.0,
                           contiguity == Contiguity::queen ? "queen" : "rook"};
    return Lattice{UnitCollection(std::move(units), CoordinateSystem::planar),
                   WeightMatrix(rows * cols, std::move(entries), info), rows, cols};
}

Eigen::MatrixXd weights_to_dense(const WeightMatrix& W) {
    if (W.n() > 10000) throw ConfigError("dense weight operations are guarded at n <= 10000");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(W.n(), W.n());
    for (int i = 0; i < W.n(); ++i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        for (std::size_t t = 0; t < cols.size(); ++t) M(i, cols[t]) = ws[t];
    }
    return M;
}

namespace {

Eigen::VectorXd noise_vector(int n, double sigma, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::VectorXd eps(n);
    for (int i = 0; i < n; ++i) eps(i) = sigma * rng.normal(static_cast<std::uint64_t>(i));
    return eps;
}

void check_sar_inputs(const WeightMatrix& W, const Eigen::MatrixXd& X,
                      const Eigen::VectorXd& beta, double coef, double sigma,
                      const char* name) {
    if (!W.standardized()) throw ConfigError(std::string(name) + " simulation requires a row-standardized W");
    if (std::fabs(coef) >= 1.0)
        throw ConfigError(std::string(name) + " coefficient must satisfy |value| < 1 for a row-standardized W");
    if (X.rows() != W.n()) throw DataError("design row count does not match W");
    if (X.cols() != beta.size()) throw DataError("beta length does not match design columns");
    if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
}

}  // namespace

AttributeVector simulate_sar_lag(const WeightMatrix& W, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& beta, double rho, double sigma,
                                 std::uint64_t seed) {
    check_sar_inputs(W, X, beta, rho, sigma, "SAR lag");
    const int n = W.n();
    const Eigen::VectorXd signal = X * beta + noise_vector(n, sigma, seed);
    Eigen::VectorXd y;
    if (rho == 0.0) {
        y = signal;
    } else {
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - rho * weights_to_dense(W);
        y = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(signal);
    }
    AttributeVector out;
    out.name = "y";
    out.values.assign(y.data(), y.data() + n);
    return out;
}

AttributeVector simulate_sar_error(const WeightMatrix& W, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& beta, double lambda, double sigma,
                                   std::uint64_t seed) {
    check_sar_inputs(W, X, beta, lambda, sigma, "SAR error");
    const int n = W.n();
    const Eigen::VectorXd eps = noise_vector(n, sigma, seed);
    Eigen::VectorXd u;
    if (lambda == 0.0) {
        u = eps;
    } else {
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - lambda * weights_to_dense(W);
        u = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(eps);
    }
    const Eigen::VectorXd y = X * beta + u;
    AttributeVector out;
    out.name = "y";
    out.values.assign(y.data(), y.data() + n);
    return out;
}

GwrSurfaceData simulate_gwr_surface(const std::vector<Point>& coords,
                                    const std::vector<CoefficientFn>& beta_fns, double sigma,
                                    std::uint64_t seed) {
    if (beta_fns.empty()) throw ConfigError("at least the intercept surface is required");
    const int n = static_cast<int>(coords.size());
    const int p = static_cast<int>(beta_fns.size()) - 1;
    GwrSurfaceData out;
    out.X = gaussian_design(n, p, derive_seed(seed, 1));
    out.y.resize(n);
    CounterRng noise(derive_seed(seed, 2));
    for (int i = 0; i < n; ++i) {
        const double u = coords[static_cast<std::size_t>(i)].x;
        const double v = coords[static_cast<std::size_t>(i)].y;
        double mu = beta_fns[0](u, v);
        for (int k = 1; k <= p; ++k) mu += beta_fns[static_cast<std::size_t>(k)](u, v) * out.X(i, k);
        if (!std::isfinite(mu)) throw DataError("coefficient surface is not finite at a coordinate");
        out.y(i) = mu + sigma * noise.normal(static_cast<std::uint64_t>(i));
    }
    return out;
}

Eigen::MatrixXd gaussian_design(int n, int p, std::uint64_t seed) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, p + 1);
    CounterRng rng(seed);
    for (int k = 1; k <= p; ++k)
        for (int i = 0; i < n; ++i)
            X(i, k) = rng.normal(static_cast<std::uint64_t>(k - 1) * n + i);
    return X;
}

AttributeVector checkerboard(int rows, int cols) {
    if (rows < 2 || cols < 2) throw ConfigError("pattern needs rows >= 2 and cols >= 2");
    AttributeVector out;
    out.name = "checkerboard";
    out.values.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.values.push_back((r + c) % 2 == 0 ? 1.0 : -1.0);
    return out;
}

AttributeVector gradient(int rows, int cols) {
    if (rows < 2 || cols < 2) throw ConfigError("pattern needs rows >= 2 and cols >= 2");
    AttributeVector out;
    out.name = "gradient";
    out.values.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.values.push_back(static_cast<double>(r));
    return out;
}

AttributeVector planted_block(int rows, int cols, const BlockExtent& extent, double level) {
    if (rows < 2 || cols < 2) throw ConfigError("pattern needs rows >= 2 and cols >= 2");
    if (extent.row0 < 0 || extent.col0 < 0 || extent.rows < 1 || extent.cols < 1 ||
        extent.row0 + extent.rows > rows || extent.col0 + extent.cols > cols)
        throw ConfigError("planted block extent exceeds the lattice");
    AttributeVector out;
    out.name = "planted_block";
    out.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    for (int r = extent.row0; r < extent.row0 + extent.rows; ++r)
        for (int c = extent.col0; c < extent.col0 + extent.cols; ++c)
            out.values[static_cast<std::size_t>(r) * cols + c] = level;
    return out;
}

AttributeVector iid_noise(int n, double sigma, std::uint64_t seed) {
    AttributeVector out;
    out.name = "noise";
    out.values.resize(static_cast<std::size_t>(n));
    CounterRng rng(seed);
    for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = sigma * rng.normal(static_cast<std::uint64_t>(i));
    return out;
}

}  // namespace areal
