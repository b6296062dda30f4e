#pragma once

namespace rw2 {

inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

/// Standard normal density; phi(+-inf) = 0 by the sentinel convention.
double norm_pdf(double z);

/// Standard normal CDF.
double norm_cdf(double z);

/// Inverse standard normal CDF. Accurate to near machine precision on
/// (1e-300, 1 - 1e-16); returns -inf / +inf at p = 0 / p = 1.
double norm_ppf(double p);

/// Antiderivative of z^2 phi(z), i.e. -z phi(z) + Phi(z), with sentinel
/// values 0 at -inf and 1 at +inf.
double norm_z2_antideriv(double z);

} // namespace rw2
