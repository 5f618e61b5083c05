#pragma once

#include <cstdint>
#include <vector>

#include "lot/report.hpp"

namespace lot {

/// k-generalized sine: solution of f'' + k f = 0, f(0) = 0, f'(0) = 1.
/// A series fallback covers |k| t^2 < 1e-8 where the closed forms cancel.
double sin_k(double k, double t);

/// Reduced distortion coefficient sigma_k^{(t)}(theta):
/// sin_k(t theta)/sin_k(theta) on the guarded domain k theta^2 < pi^2,
/// +infinity otherwise; sigma(k, t, 0) = t by continuity.
double sigma(double k, double t, double theta);

/// Distortion coefficient tau_{K,N}^{(t)}(theta) = t^{1/N} sigma_{K/(N-1)}^{(t)}(theta)^{1-1/N},
/// with (+inf)^{1-1/N} = +inf. Requires N > 1.
double tau(double K, double N, double t, double theta);

struct DistortionSample {
  double K = 0.0;
  double N = 2.0;
  double t = 0.5;
  double theta = 1.0;
  double a = 1.0;  // scaling factor for the rescaling identity
};

/// Random samples with theta kept inside the sigma guard for the sampled K, N.
std::vector<DistortionSample> random_guarded_samples(int count, std::uint64_t seed);

/// Asserts on the sample grid:
///  1. rescaling sigma_K^{(t)}(a theta) = sigma_{a^2 K}^{(t)}(theta) to 1e-10;
///  2. sigma_{K/N} <= tau_{K,N} + 1e-12 pointwise;
///  3. midpoint log-convexity of theta -> tau(sqrt(theta)) and monotone
///     non-decrease in K, via three-point checks on the guarded domain;
///  4. endpoint normalization sigma^{(0)} = tau^{(0)} = 0 and
///     sigma^{(1)} = tau^{(1)} = 1, exactly.
VerificationReport check_distortion_properties(const std::vector<DistortionSample>& samples);

}  // namespace lot
