#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "areal/model_compare.hpp"
#include "areal/moran.hpp"
#include "areal/units.hpp"

namespace areal {

/// Estimate / expectation / variance / p-value row plus scheme metadata.
nlohmann::json moran_result_to_json(const MoranGlobalResult& r);

nlohmann::json lisa_result_to_json(const MoranLocalResult& r);

/// Coefficient table in fit order; rho/lambda rows carry the LR-test p.
nlohmann::json linear_fit_to_json(const LinearFit& fit);

/// Five-number coefficient summaries, bandwidth, effective parameters,
/// quasi-R^2, and the local surfaces.
nlohmann::json gwr_fit_to_json(const GwrFit& fit);

nlohmann::json comparison_to_json(const ModelComparison& cmp);

nlohmann::json group_summary_to_json(const std::map<std::string, std::map<LisaClass, int>>& table);

/// Share of an attribute's grand total held by each group label.
/// Shares sum to 1 exactly up to rounding of the division itself.
std::map<std::string, double> aggregate_share(const UnitCollection& units,
                                              const std::string& attribute);

}  // namespace areal
