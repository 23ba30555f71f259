#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "areal/stats.hpp"
#include "areal/units.hpp"
#include "areal/weights.hpp"

namespace areal {

enum class MoranScheme { normality, randomization, permutation };

std::string moran_scheme_name(MoranScheme s);
std::string alternative_name(Alternative a);

struct MoranGlobalResult {
    double I = 0.0;
    double expectation = 0.0;
    double variance = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    MoranScheme scheme = MoranScheme::randomization;
    Alternative alternative = Alternative::two_sided;
    int nperm = 0;            // permutation scheme only
    std::uint64_t seed = 0;   // permutation scheme only
};

enum class LisaClass { HighHigh, LowLow, HighLow, LowHigh, NotSignificant };

/// Short map codes: HH, LL, HL, LH, NS.
const char* lisa_code(LisaClass c);

struct MoranLocalResult {
    std::vector<double> local_I;
    std::vector<double> p_values;
    std::vector<LisaClass> classes;
};

/// Global Moran's I: (n/S0) * sum_ij w_ij (y_i - ybar)(y_j - ybar) / sum_i (y_i - ybar)^2.
double moran_global(const AttributeVector& y, const WeightMatrix& W);

/// Null moments under the analytic normality / randomization assumptions
/// (Cliff-Ord closed forms).  Returns (expectation, variance).
std::pair<double, double> moran_null_moments(const AttributeVector& y, const WeightMatrix& W,
                                             MoranScheme scheme);

/// Analytic z test of I against its null moments.
MoranGlobalResult moran_test(const AttributeVector& y, const WeightMatrix& W, MoranScheme scheme,
                             Alternative alternative);

/// Monte-Carlo test: permutation t draws its sub-seed as seed XOR t, so the
/// result is independent of evaluation order and worker count.  The reported
/// expectation/variance are the moments of the permutation sample.
MoranGlobalResult moran_permutation(const AttributeVector& y, const WeightMatrix& W, int nperm,
                                    std::uint64_t seed,
                                    Alternative alternative = Alternative::two_sided);

/// Local Moran's I_i = n (y_i - ybar) sum_j w_ij (y_j - ybar) / sum_i (y_i - ybar)^2.
std::vector<double> moran_local(const AttributeVector& y, const WeightMatrix& W);

/// Conditional permutation: hold y_i, permute the rest; two-sided pseudo-p.
/// Units with an empty neighborhood get p = 1.
std::vector<double> local_permutation(const AttributeVector& y, const WeightMatrix& W, int nperm,
                                      std::uint64_t seed);

/// Quadrant classification of units whose p-value passes alpha_level.
/// Signs of the centered value and the centered spatial lag pick the class;
/// an exact zero of either resolves to NotSignificant.
std::vector<LisaClass> lisa_classify(const AttributeVector& y, const WeightMatrix& W,
                                     const std::vector<double>& p_values, double alpha_level);

/// Per-group counts of significant units by class; groups with no
/// significant units are omitted.  Unlabeled units fall into group "all".
std::map<std::string, std::map<LisaClass, int>> lisa_group_summary(
    const std::vector<LisaClass>& classes, const UnitCollection& units);

/// moran_local + local_permutation + lisa_classify in one call.  With
/// `bonferroni` the classification level becomes alpha_level / n (off by
/// default; published LISA maps are conventionally uncorrected).
MoranLocalResult lisa(const AttributeVector& y, const WeightMatrix& W, int nperm,
                      std::uint64_t seed, double alpha_level, bool bonferroni = false);

}  // namespace areal
