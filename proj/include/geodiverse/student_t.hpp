// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

namespace geodiverse::stats {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation converged to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// One-sided p-value for H1: coefficient > 0 given its t statistic.
double p_value_greater(double t, double dof);
/// One-sided p-value for H1: coefficient < 0.
double p_value_less(double t, double dof);
/// Two-sided p-value.
double p_value_two_sided(double t, double dof);

} // namespace geodiverse::stats
