#include "areal/moran.hpp"

#include <algorithm>
#include <cmath>

#include "areal/error.hpp"
#include "areal/parallel.hpp"
#include "areal/rng.hpp"

namespace areal {

std::string moran_scheme_name(MoranScheme s) {
    switch (s) {
        case MoranScheme::normality: return "normality";
        case MoranScheme::randomization: return "randomization";
        case MoranScheme::permutation: return "permutation";
    }
    return "?";
}

std::string alternative_name(Alternative a) {
    switch (a) {
        case Alternative::two_sided: return "two_sided";
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
    }
    return "?";
}

const char* lisa_code(LisaClass c) {
    switch (c) {
        case LisaClass::HighHigh: return "HH";
        case LisaClass::LowLow: return "LL";
        case LisaClass::HighLow: return "HL";
        case LisaClass::LowHigh: return "LH";
        case LisaClass::NotSignificant: return "NS";
    }
    return "?";
}

namespace {

struct Centered {
    std::vector<double> z;
    double ssq = 0.0;  // sum of squared deviations
};

Centered center(const AttributeVector& y, const WeightMatrix& W) {
    if (y.size() != W.n())
        throw DataError("attribute '" + y.name + "' has length " + std::to_string(y.size()) +
                        " but the weight matrix has n = " + std::to_string(W.n()));
    const auto n = y.values.size();
    double mean = 0.0;
    for (double v : y.values) {
        if (!std::isfinite(v)) throw DataError("attribute '" + y.name + "' contains a non-finite value");
        mean += v;
    }
    mean /= static_cast<double>(n);
    Centered c;
    c.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.z[i] = y.values[i] - mean;
        c.ssq += c.z[i] * c.z[i];
    }
    if (c.ssq <= 0.0)
        throw DataError("attribute '" + y.name + "' is constant; Moran's I undefined");
    return c;
}

double cross_product(const WeightMatrix& W, const std::vector<double>& z) {
    double s = 0.0;
    for (int i = 0; i < W.n(); ++i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        double lag = 0.0;
        for (std::size_t t = 0; t < cols.size(); ++t) lag += ws[t] * z[static_cast<std::size_t>(cols[t])];
        s += z[static_cast<std::size_t>(i)] * lag;
    }
    return s;
}

}  // namespace

double moran_global(const AttributeVector& y, const WeightMatrix& W) {
    const auto c = center(y, W);
    return (static_cast<double>(W.n()) / W.s0()) * cross_product(W, c.z) / c.ssq;
}

std::pair<double, double> moran_null_moments(const AttributeVector& y, const WeightMatrix& W,
                                             MoranScheme scheme) {
    const double n = static_cast<double>(W.n());
    const double e = -1.0 / (n - 1.0);
    const double s0 = W.s0(), s1 = W.s1(), s2 = W.s2();
    double var;
    if (scheme == MoranScheme::normality) {
        var = (n * n * s1 - n * s2 + 3.0 * s0 * s0) / (s0 * s0 * (n * n - 1.0)) - e * e;
    } else if (scheme == MoranScheme::randomization) {
        if (W.n() < 4) throw DataError("randomization variance needs n >= 4");
        const auto c = center(y, W);
        double z4 = 0.0;
        for (double z : c.z) z4 += z * z * z * z;
        const double b2 = n * z4 / (c.ssq * c.ssq);
        const double num = n * ((n * n - 3.0 * n + 3.0) * s1 - n * s2 + 3.0 * s0 * s0) -
                           b2 * ((n * n - n) * s1 - 2.0 * n * s2 + 6.0 * s0 * s0);
        var = num / ((n - 1.0) * (n - 2.0) * (n - 3.0) * s0 * s0) - e * e;
    } else {
        throw ConfigError("analytic null moments exist only for normality/randomization");
    }
    // n = 2 under normality degenerates to exactly zero variance
    if (!(var >= 0.0)) throw DataError("null variance of Moran's I is negative");
    return {e, var};
}

MoranGlobalResult moran_test(const AttributeVector& y, const WeightMatrix& W, MoranScheme scheme,
                             Alternative alternative) {
    MoranGlobalResult r;
    r.I = moran_global(y, W);
    std::tie(r.expectation, r.variance) = moran_null_moments(y, W, scheme);
    if (!(r.variance > 0.0)) throw DataError("null variance of Moran's I is zero");
    r.z = (r.I - r.expectation) / std::sqrt(r.variance);
    r.p_value = normal_p_value(r.z, alternative);
    r.scheme = scheme;
    r.alternative = alternative;
    return r;
}

MoranGlobalResult moran_permutation(const AttributeVector& y, const WeightMatrix& W, int nperm,
                                    std::uint64_t seed, Alternative alternative) {
    if (nperm < 99) throw ConfigError("permutation test needs nperm >= 99");
    const auto c = center(y, W);
    const double observed = (static_cast<double>(W.n()) / W.s0()) * cross_product(W, c.z) / c.ssq;
    const double scale = static_cast<double>(W.n()) / (W.s0() * c.ssq);

    std::vector<double> sample(static_cast<std::size_t>(nperm));
    parallel_for(0, nperm, [&](int t) {
        CounterRng rng(seed ^ static_cast<std::uint64_t>(t));
        std::vector<double> zp = c.z;
        counter_shuffle(zp, rng);
        sample[static_cast<std::size_t>(t)] = scale * cross_product(W, zp);
    });

    int ge = 0, le = 0;
    double mean = 0.0;
    for (double v : sample) {
        if (v >= observed) ++ge;
        if (v <= observed) ++le;
        mean += v;
    }
    mean /= static_cast<double>(nperm);
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= static_cast<double>(nperm - 1);

    const double p_greater = (1.0 + ge) / static_cast<double>(nperm + 1);
    const double p_less = (1.0 + le) / static_cast<double>(nperm + 1);

    MoranGlobalResult r;
    r.I = observed;
    r.expectation = mean;
    r.variance = var;
    r.z = var > 0.0 ? (observed - mean) / std::sqrt(var) : 0.0;
    switch (alternative) {
        case Alternative::greater: r.p_value = p_greater; break;
        case Alternative::less: r.p_value = p_less; break;
        case Alternative::two_sided: default:
            r.p_value = std::min(1.0, 2.0 * std::min(p_greater, p_less));
            break;
    }
    r.scheme = MoranScheme::permutation;
    r.alternative = alternative;
    r.nperm = nperm;
    r.seed = seed;
    return r;
}

std::vector<double> moran_local(const AttributeVector& y, const WeightMatrix& W) {
    const auto c = center(y, W);
    const double n = static_cast<double>(W.n());
    std::vector<double> local(static_cast<std::size_t>(W.n()), 0.0);
    for (int i = 0; i < W.n(); ++i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        double lag = 0.0;
        for (std::size_t t = 0; t < cols.size(); ++t) lag += ws[t] * c.z[static_cast<std::size_t>(cols[t])];
        local[static_cast<std::size_t>(i)] = n * c.z[static_cast<std::size_t>(i)] * lag / c.ssq;
    }
    return local;
}

std::vector<double> local_permutation(const AttributeVector& y, const WeightMatrix& W, int nperm,
                                      std::uint64_t seed) {
    if (nperm < 99) throw ConfigError("permutation test needs nperm >= 99");
    const auto c = center(y, W);
    const int n = W.n();
    const auto observed = moran_local(y, W);
    std::vector<double> p(static_cast<std::size_t>(n), 1.0);

    parallel_for(0, n, [&](int i) {
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        const int deg = static_cast<int>(cols.size());
        if (deg == 0) return;  // island: p stays 1 by convention

        // pool of centered values at the other n-1 locations
        std::vector<double> pool;
        pool.reserve(static_cast<std::size_t>(n) - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) pool.push_back(c.z[static_cast<std::size_t>(j)]);

        const double factor = static_cast<double>(n) * c.z[static_cast<std::size_t>(i)] / c.ssq;
        const double obs = observed[static_cast<std::size_t>(i)];
        int ge = 0, le = 0;
        std::vector<std::pair<int, int>> swaps(static_cast<std::size_t>(deg));
        for (int t = 0; t < nperm; ++t) {
            CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(t)));
            // partial Fisher-Yates: draw deg values without replacement
            double lag = 0.0;
            for (int s = 0; s < deg; ++s) {
                const int remaining = n - 1 - s;
                auto r = s + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s)) *
                                              static_cast<double>(remaining));
                if (r >= n - 1) r = n - 2;
                std::swap(pool[static_cast<std::size_t>(s)], pool[static_cast<std::size_t>(r)]);
                swaps[static_cast<std::size_t>(s)] = {s, r};
                lag += ws[static_cast<std::size_t>(s)] * pool[static_cast<std::size_t>(s)];
            }
            for (int s = deg - 1; s >= 0; --s)
                std::swap(pool[static_cast<std::size_t>(swaps[static_cast<std::size_t>(s)].first)],
                          pool[static_cast<std::size_t>(swaps[static_cast<std::size_t>(s)].second)]);
            const double perm_I = factor * lag;
            if (perm_I >= obs) ++ge;
            if (perm_I <= obs) ++le;
        }
        const double pg = (1.0 + ge) / static_cast<double>(nperm + 1);
        const double pl = (1.0 + le) / static_cast<double>(nperm + 1);
        p[static_cast<std::size_t>(i)] = std::min(1.0, 2.0 * std::min(pg, pl));
    });
    return p;
}

std::vector<LisaClass> lisa_classify(const AttributeVector& y, const WeightMatrix& W,
                                     const std::vector<double>& p_values, double alpha_level) {
    if (!(alpha_level > 0.0 && alpha_level < 1.0))
        throw ConfigError("alpha_level must lie in (0,1)");
    if (static_cast<int>(p_values.size()) != W.n())
        throw DataError("p-value vector length does not match n");
    const auto c = center(y, W);
    std::vector<LisaClass> classes(static_cast<std::size_t>(W.n()), LisaClass::NotSignificant);
    for (int i = 0; i < W.n(); ++i) {
        if (p_values[static_cast<std::size_t>(i)] > alpha_level) continue;
        const auto cols = W.neighbors(i);
        const auto ws = W.weights(i);
        double lag = 0.0;
        for (std::size_t t = 0; t < cols.size(); ++t) lag += ws[t] * c.z[static_cast<std::size_t>(cols[t])];
        const double zi = c.z[static_cast<std::size_t>(i)];
        if (zi == 0.0 || lag == 0.0) continue;  // quadrant undefined at the origin
        if (zi > 0.0)
            classes[static_cast<std::size_t>(i)] = lag > 0.0 ? LisaClass::HighHigh : LisaClass::HighLow;
        else
            classes[static_cast<std::size_t>(i)] = lag > 0.0 ? LisaClass::LowHigh : LisaClass::LowLow;
    }
    return classes;
}

std::map<std::string, std::map<LisaClass, int>> lisa_group_summary(
    const std::vector<LisaClass>& classes, const UnitCollection& units) {
    if (static_cast<int>(classes.size()) != units.size())
        throw DataError("class vector length does not match unit count");
    std::map<std::string, std::map<LisaClass, int>> table;
    for (int i = 0; i < units.size(); ++i) {
        const auto cls = classes[static_cast<std::size_t>(i)];
        if (cls == LisaClass::NotSignificant) continue;
        const std::string group = units[i].group.empty() ? "all" : units[i].group;
        ++table[group][cls];
    }
    return table;
}

MoranLocalResult lisa(const AttributeVector& y, const WeightMatrix& W, int nperm,
                      std::uint64_t seed, double alpha_level, bool bonferroni) {
    MoranLocalResult r;
    r.local_I = moran_local(y, W);
    r.p_values = local_permutation(y, W, nperm, seed);
    // pseudo-p values are bounded below by 1/(nperm+1), so a corrected
    // level below that bound marks everything NotSignificant
    const double level = bonferroni ? alpha_level / static_cast<double>(W.n()) : alpha_level;
    r.classes = lisa_classify(y, W, r.p_values, level);
    return r;
}

}  // namespace areal
