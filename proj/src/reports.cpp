#include "areal/reports.hpp"

#include <cmath>

#include "areal/error.hpp"

namespace areal {

using nlohmann::json;

namespace {

json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

json moran_result_to_json(const MoranGlobalResult& r) {
    json j{{"estimate", r.I},
           {"expectation", r.expectation},
           {"variance", r.variance},
           {"z", r.z},
           {"p_value", r.p_value},
           {"scheme", moran_scheme_name(r.scheme)},
           {"alternative", alternative_name(r.alternative)}};
    if (r.scheme == MoranScheme::permutation) {
        j["nperm"] = r.nperm;
        j["seed"] = r.seed;
    }
    return j;
}

json lisa_result_to_json(const MoranLocalResult& r) {
    json classes = json::array();
    for (auto c : r.classes) classes.push_back(lisa_code(c));
    return json{{"local_i", r.local_I}, {"p_values", r.p_values}, {"classes", classes}};
}

json linear_fit_to_json(const LinearFit& fit) {
    json coeffs = json::array();
    for (const auto& c : fit.coefficients)
        coeffs.push_back(json{{"name", c.name},
                              {"estimate", c.estimate},
                              {"std_error", number_or_null(c.std_error)},
                              {"p_value", number_or_null(c.p_value)}});
    json j{{"model", linear_model_name(fit.model)},
           {"coefficients", coeffs},
           {"sigma2", fit.sigma2},
           {"log_likelihood", fit.log_likelihood},
           {"aic", fit.aic},
           {"rss", fit.rss},
           {"residuals", std::vector<double>(fit.residuals.data(),
                                             fit.residuals.data() + fit.residuals.size())},
           {"fitted", std::vector<double>(fit.fitted.data(),
                                          fit.fitted.data() + fit.fitted.size())}};
    if (fit.adj_r2) j["adj_r2"] = *fit.adj_r2;
    if (fit.rho)
        j["rho"] = json{{"estimate", *fit.rho},
                        {"std_error", number_or_null(fit.rho_se.value_or(NAN))},
                        {"lr_p", fit.lr_p ? json(*fit.lr_p) : json(nullptr)}};
    if (fit.lambda)
        j["lambda"] = json{{"estimate", *fit.lambda},
                           {"std_error", number_or_null(fit.lambda_se.value_or(NAN))},
                           {"lr_p", fit.lr_p ? json(*fit.lr_p) : json(nullptr)}};
    return j;
}

json gwr_fit_to_json(const GwrFit& fit) {
    json summary = json::array();
    for (std::size_t k = 0; k < fit.coefficient_summary.size(); ++k) {
        const auto& s = fit.coefficient_summary[k];
        summary.push_back(json{{"name", fit.names[k]},
                               {"min", s.min},
                               {"q1", s.q1},
                               {"median", s.median},
                               {"q3", s.q3},
                               {"max", s.max}});
    }
    json local = json::array();
    for (Eigen::Index i = 0; i < fit.local_coefficients.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < fit.local_coefficients.cols(); ++k)
            row.push_back(fit.local_coefficients(i, k));
        local.push_back(std::move(row));
    }
    return json{{"model", "gwr"},
                {"kernel", gwr_kernel_name(fit.kernel)},
                {"bandwidth", fit.bandwidth},
                {"effective_params", fit.effective_params},
                {"quasi_r2", fit.quasi_r2},
                {"aic", fit.aic},
                {"rss", fit.rss},
                {"log_likelihood", fit.log_likelihood},
                {"coefficient_summary", summary},
                {"local_coefficients", local},
                {"local_r2", fit.local_r2},
                {"residuals", std::vector<double>(fit.residuals.data(),
                                                  fit.residuals.data() + fit.residuals.size())},
                {"fitted", std::vector<double>(fit.fitted.data(),
                                               fit.fitted.data() + fit.fitted.size())}};
}

json comparison_to_json(const ModelComparison& cmp) {
    json rows = json::array();
    for (const auto& row : cmp.rows) {
        rows.push_back(json{{"model", row.model},
                            {"r2", row.r2 ? json(*row.r2) : json(nullptr)},
                            {"r2_label", row.r2_label},
                            {"aic", row.aic},
                            {"rss", row.rss},
                            {"residual_moran", moran_result_to_json(row.moran)}});
    }
    return json{{"models", rows}};
}

json group_summary_to_json(const std::map<std::string, std::map<LisaClass, int>>& table) {
    json rows = json::array();
    for (const auto& [group, counts] : table) {
        json row{{"group", group},
                 {"low_low", 0}, {"low_high", 0}, {"high_low", 0}, {"high_high", 0}};
        for (const auto& [cls, count] : counts) {
            switch (cls) {
                case LisaClass::LowLow: row["low_low"] = count; break;
                case LisaClass::LowHigh: row["low_high"] = count; break;
                case LisaClass::HighLow: row["high_low"] = count; break;
                case LisaClass::HighHigh: row["high_high"] = count; break;
                default: break;
            }
        }
        rows.push_back(std::move(row));
    }
    return json{{"groups", rows}};
}

std::map<std::string, double> aggregate_share(const UnitCollection& units,
                                              const std::string& attribute) {
    const auto values = units.attribute(attribute);
    std::map<std::string, double> sums;
    double total = 0.0;
    for (int i = 0; i < units.size(); ++i) {
        const std::string group = units[i].group.empty() ? "all" : units[i].group;
        sums[group] += values.values[static_cast<std::size_t>(i)];
        total += values.values[static_cast<std::size_t>(i)];
    }
    if (total == 0.0) throw DataError("attribute '" + attribute + "' sums to zero; shares undefined");
    for (auto& [_, v] : sums) v /= total;
    return sums;
}

}  // namespace areal
