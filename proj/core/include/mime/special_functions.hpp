#pragma once

// Scalar special functions shared by the distribution and feature-audit code.

namespace mime::special {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal lower tail, Phi(z). Uses erfc on both sides so neither
/// tail loses relative precision.
double normal_cdf(double z);

/// Standard normal upper tail, 1 - Phi(z).
double normal_sf(double z);

/// Inverse of Phi on (0, 1). Rational starting point refined with one Halley
/// step against erfc; absolute error is at the level of double rounding.
/// Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Chi-square CDF with `dof` degrees of freedom.
double chi2_cdf(double x, double dof);

/// Inverse chi-square CDF by bisection on chi2_cdf.
/// Throws std::invalid_argument unless dof > 0 and 0 < level < 1.
double chi2_quantile(double level, double dof);

}  // namespace mime::special
