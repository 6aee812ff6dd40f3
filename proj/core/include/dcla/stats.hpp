#pragma once

namespace dcla::stats {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Two-sided p-value for a t statistic: P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

/// Sample variance with the n-1 divisor; 0 for fewer than two values.
double sample_variance(const double* values, int n);

} // namespace dcla::stats
