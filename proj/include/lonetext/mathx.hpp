#pragma once

namespace lonetext {

// Digamma for x > 0 via the shift recurrence plus the asymptotic series.
// Accurate to <= 1e-12 relative for arguments >= 1e-4.
double digamma(double x);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with df degrees of freedom,
// p = I_{df/(df+t^2)}(df/2, 1/2). Exactly 1 at t = 0.
double student_t_two_sided_p(double t, double df);

// Smallest t >= 0 with two-sided tail probability alpha (e.g. alpha = 0.05
// and df = 9 gives 2.2622). Solved by bisection on the monotone CDF.
double student_t_critical(double alpha_two_sided, double df);

}  // namespace lonetext
