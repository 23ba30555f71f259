#pragma once

#include <vector>

namespace areal {

enum class Alternative { two_sided, greater, less };

/// Standard normal CDF.
double normal_cdf(double z);

/// p-value of a standard normal z statistic under the given alternative.
double normal_p_value(double z, Alternative alt);

/// Upper tail of the chi-squared distribution with 1 degree of freedom.
double chi2_tail_1df(double x);

/// Regularized incomplete beta function I_x(a, b).
double inc_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided(double t, double df);

/// Linear-interpolation quantile (R type 7) of already-sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct FiveNumber {
    double min, q1, median, q3, max;
};

/// min / Q1 / median / Q3 / max of a sample (copy is sorted internally).
FiveNumber five_number_summary(std::vector<double> values);

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);  // divisor n-1

}  // namespace areal
