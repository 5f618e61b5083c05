#include "lot/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lot/errors.hpp"
#include "lot/rng.hpp"

namespace lot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double sin_k(double k, double t) {
  const double x = k * t * t;
  if (std::abs(x) < 1e-8)
    return t * (1.0 - x / 6.0 + x * x / 120.0);
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * t) / s;
  }
  const double s = std::sqrt(-k);
  return std::sinh(s * t) / s;
}

double sigma(double k, double t, double theta) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("sigma: t must be in [0,1]");
  if (!(theta >= 0.0)) throw Error("sigma: theta must be >= 0");
  if (theta == 0.0) return t;
  if (k * theta * theta >= std::numbers::pi * std::numbers::pi) return kInf;
  return sin_k(k, t * theta) / sin_k(k, theta);
}

double tau(double K, double N, double t, double theta) {
  if (!(N > 1.0)) throw Error("tau: N must be > 1");
  const double s = sigma(K / (N - 1.0), t, theta);
  if (std::isinf(s)) return kInf;
  return std::pow(t, 1.0 / N) * std::pow(s, 1.0 - 1.0 / N);
}

std::vector<DistortionSample> random_guarded_samples(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DistortionSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    DistortionSample s;
    s.K = rng.uniform(-5.0, 5.0);
    s.N = rng.uniform(1.0 + 1e-3, 10.0);
    s.t = rng.uniform01();
    s.a = rng.uniform(0.1, 3.0);
    // Keep theta inside the sigma guard for every k this sample is used with:
    // K/(N-1), K/N, a^2 K, and the K-monotonicity probe below K.
    double kmax = 0.0;
    if (s.K > 0.0)
      kmax = std::max({s.K / (s.N - 1.0), s.K / s.N, s.a * s.a * s.K, s.K});
    const double cap = kmax > 0.0 ? 0.9 * std::numbers::pi / std::sqrt(kmax) : 6.0;
    s.theta = rng.uniform(0.0, cap);
    out.push_back(s);
  }
  return out;
}

VerificationReport check_distortion_properties(const std::vector<DistortionSample>& samples) {
  VerificationReport report;
  report.kind = "distortion_properties";

  double worst_scaling = 0.0;       // |sigma_K(a theta) - sigma_{a^2 K}(theta)|
  double worst_order = -kInf;       // sigma_{K/N} - tau_{K,N}, should be <= 0
  double worst_logconvex = -kInf;   // log tau(mid)^2 - log(tau(a) tau(b))
  double worst_monotone = -kInf;    // tau(K') - tau(K) for K' < K
  double worst_endpoint = 0.0;      // deviation of the exact endpoint identities

  for (const DistortionSample& s : samples) {
    const double lhs_scaling = sigma(s.K, s.t, s.a * s.theta);
    const double rhs_scaling = sigma(s.a * s.a * s.K, s.t, s.theta);
    if (std::isfinite(lhs_scaling) && std::isfinite(rhs_scaling))
      worst_scaling = std::max(worst_scaling, std::abs(lhs_scaling - rhs_scaling));

    const double sig = sigma(s.K / s.N, s.t, s.theta);
    const double tav = tau(s.K, s.N, s.t, s.theta);
    if (std::isfinite(sig) && std::isfinite(tav))
      worst_order = std::max(worst_order, sig - tav);

    // Midpoint log-convexity of theta -> tau(sqrt(theta)), probed at
    // theta^2 and (0.7 theta)^2.
    if (s.t > 0.0 && s.theta > 0.0) {
      const double ta = s.theta * s.theta;
      const double tb = 0.49 * ta;
      const double tm = 0.5 * (ta + tb);
      const double fa = tau(s.K, s.N, s.t, std::sqrt(ta));
      const double fb = tau(s.K, s.N, s.t, std::sqrt(tb));
      const double fm = tau(s.K, s.N, s.t, std::sqrt(tm));
      if (std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fm) && fa > 0.0 &&
          fb > 0.0 && fm > 0.0)
        worst_logconvex =
            std::max(worst_logconvex, 2.0 * std::log(fm) - std::log(fa) - std::log(fb));
    }

    // Monotone non-decrease in K on the guarded domain.
    const double k_lower = s.K - 0.1 * std::abs(s.K) - 0.01;
    const double t_lo = tau(k_lower, s.N, s.t, s.theta);
    if (std::isfinite(t_lo) && std::isfinite(tav))
      worst_monotone = std::max(worst_monotone, t_lo - tav);

    const double k_red = s.K / (s.N - 1.0);
    worst_endpoint = std::max({worst_endpoint, std::abs(sigma(k_red, 0.0, s.theta)),
                               std::abs(tau(s.K, s.N, 0.0, s.theta))});
    if (std::isfinite(sigma(k_red, 1.0, s.theta)))
      worst_endpoint = std::max({worst_endpoint,
                                 std::abs(sigma(k_red, 1.0, s.theta) - 1.0),
                                 std::abs(tau(s.K, s.N, 1.0, s.theta) - 1.0)});
  }

  const auto add = [&report](const char* kind, double gap, double tol) {
    ReportRow row;
    row.kind = kind;
    row.lhs = gap;
    row.rhs = tol;
    row.margin = tol - gap;
    row.pass = gap <= tol;
    if (!row.pass) row.reason = "violation";
    report.add(row);
  };

  add("distortion_scaling", worst_scaling, 1e-10);
  add("distortion_sigma_le_tau", worst_order, 1e-12);
  add("distortion_log_convexity", worst_logconvex, 1e-10);
  add("distortion_monotone_in_K", worst_monotone, 1e-10);
  add("distortion_endpoints", worst_endpoint, 0.0);
  return report;
}

}  // namespace lot
