#include "areal/design.hpp"

#include <cmath>
#include <set>

#include "areal/error.hpp"

namespace areal {

Design build_design(const UnitCollection& units, const DesignSpec& spec) {
    if (spec.predictors.empty()) throw ConfigError("a design needs at least one predictor");
    std::set<std::string> distinct(spec.predictors.begin(), spec.predictors.end());
    if (distinct.size() != spec.predictors.size())
        throw ConfigError("predictor list contains duplicates");
    if (distinct.count(spec.response))
        throw ConfigError("response '" + spec.response + "' cannot also be a predictor");
    if (spec.prevalence_per && !(*spec.prevalence_per > 0.0))
        throw ConfigError("prevalence_per must be positive");

    const int n = units.size();
    auto response = units.attribute(spec.response);

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double v = response.values[static_cast<std::size_t>(i)];
        if (spec.prevalence_per) {
            const auto pop = units[i].attributes.find(spec.population);
            if (pop == units[i].attributes.end())
                throw DataError("unit " + units[i].id + " is missing attribute '" +
                                spec.population + "' needed for prevalence scaling");
            if (!(pop->second > 0.0))
                throw DataError("unit " + units[i].id + ": population must be positive");
            v = v / pop->second * (*spec.prevalence_per);
        }
        if (spec.log_response) {
            if (!(v > 0.0))
                throw DataError("unit " + units[i].id +
                                ": response must be positive under a log transform");
            v = std::log(v);
        }
        y(i) = v;
    }

    // gather predictors, dropping zero-variance columns with a note
    std::vector<std::string> kept;
    std::vector<std::string> dropped;
    std::vector<AttributeVector> columns;
    for (const auto& name : spec.predictors) {
        auto col = units.attribute(name);
        double lo = col.values[0], hi = col.values[0];
        for (double v : col.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) {
            dropped.push_back(name);
            continue;
        }
        kept.push_back(name);
        columns.push_back(std::move(col));
    }
    if (kept.empty()) throw DataError("all predictors are constant");

    const int p = static_cast<int>(kept.size());
    if (n <= p + 1)
        throw DataError("design needs n > p+1 (n=" + std::to_string(n) +
                        ", p=" + std::to_string(p) + ")");

    Design d;
    d.X = Eigen::MatrixXd::Ones(n, p + 1);
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < n; ++i)
            d.X(i, k + 1) = columns[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(i)];
    d.y = std::move(y);
    d.names.push_back("(Intercept)");
    d.names.insert(d.names.end(), kept.begin(), kept.end());
    d.dropped = std::move(dropped);
    return d;
}

}  // namespace areal
