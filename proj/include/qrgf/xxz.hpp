#pragma once

// Spin-1/2 XXZ chain with the quantum-group boundary term, on the critical
// line |Delta| <= 1 (q = e^{i theta}, Delta = cos theta).
//
// Three-site blocks; the kept doublet has amplitudes (-C+, C+ + C-, -C-) with
// C+- = e^{+-i theta/2}/sqrt(2 Delta + 4). The flow leaves Delta invariant,
// so the RG fidelity product collapses to the closed form
// ln f = ((N-1)/2) ln omega(Delta, delta).
//
// omega is evaluated in the branch-safe trigonometric form
//   omega = h / sqrt(h^2 + 3 sin^2((t+ - t-)/2)),  h = 2 cos((t+ - t-)/2) + cos((t+ + t-)/2)
// which is manifestly in [0, 1] and equals the radical form on Delta >= 0.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "qrgf/common.hpp"

namespace qrgf {

struct XxzCouplings {
  double J;
  double delta;  // axial anisotropy, |delta| <= 1
  double theta;  // arccos(delta)
  XxzCouplings(double J_, double delta_) : J(J_), delta(delta_), theta(std::acos(delta_)) {
    if (!(J > 0.0)) throw domain_error("XxzCouplings: requires J > 0");
    if (!(std::abs(delta) <= 1.0)) throw domain_error("XxzCouplings: requires |Delta| <= 1");
  }
};

// Delta (and theta) are flow invariants; only J renormalizes.
inline XxzCouplings xxz_rg_step(const XxzCouplings& c) {
  if (c.delta == -0.5)
    throw pole_error("xxz_rg_step: J-flow pole at Delta = -1/2 (2*Delta+1 = 0)");
  const double r = (2.0 * c.delta + 2.0) / (2.0 * (2.0 * c.delta + 1.0));
  return XxzCouplings(c.J * r * r, c.delta);
}

struct XxzBlockState {
  std::complex<double> c_plus;   // e^{+i theta/2}/sqrt(2 Delta + 4)
  std::complex<double> c_minus;  // e^{-i theta/2}/sqrt(2 Delta + 4)
  double mid;                    // C+ + C- = 2 cos(theta/2)/sqrt(2 Delta + 4), real >= 0
};

inline XxzBlockState xxz_block_state(double delta_aniso) {
  if (!(std::abs(delta_aniso) <= 1.0))
    throw domain_error("xxz_block_state: requires |Delta| <= 1");
  const double theta = std::acos(delta_aniso);
  const double m = std::sqrt(2.0 * delta_aniso + 4.0);
  return XxzBlockState{std::polar(1.0 / m, 0.5 * theta), std::polar(1.0 / m, -0.5 * theta),
                       2.0 * std::cos(0.5 * theta) / m};
}

enum class OmegaBranch {
  signed_cos,   // trigonometric continuation, correct on the whole line
  radical_abs   // literal radical form with |.| branches (diagnostic)
};

// ln omega(Delta, delta). delta = 0 is exactly 0 in the signed branch
// (identical states); the radical branch is left unshortcut so its Delta < 0
// failure stays observable.
inline double xxz_log_omega(double delta_aniso, double delta,
                            OmegaBranch branch = OmegaBranch::signed_cos) {
  const double dm = delta_aniso - delta, dp = delta_aniso + delta;
  if (!(std::abs(dm) <= 1.0 && std::abs(dp) <= 1.0))
    throw domain_error("xxz_log_omega: requires |Delta +- delta| <= 1");
  if (branch == OmegaBranch::signed_cos) {
    if (delta == 0.0) return 0.0;
    const double tp = std::acos(dp), tm = std::acos(dm);
    const double half = 0.5 * (tp - tm);
    const double h = 2.0 * std::cos(half) + std::cos(0.5 * (tp + tm));
    if (!(h > 0.0)) return -std::numeric_limits<double>::infinity();
    const double r = std::sin(half) / h;
    return -0.5 * std::log1p(3.0 * r * r);
  }
  const double R = std::sqrt((1.0 - dm * dm) * (1.0 - dp * dp));
  const double u = std::sqrt(2.0) * (2.0 * std::sqrt(1.0 + dm * dp + R) +
                                     std::sqrt(std::max(0.0, 1.0 + dm * dp - R)));
  return std::log(u / (2.0 * std::sqrt((2.0 + dm) * (2.0 + dp))));
}

inline double xxz_omega(double delta_aniso, double delta,
                        OmegaBranch branch = OmegaBranch::signed_cos) {
  return std::exp(xxz_log_omega(delta_aniso, delta, branch));
}

// Closed form ln f = ((N-1)/2) ln omega, applied for any N >= 2. For
// N = 3^(ell+1) the exponent is exactly the total block count.
inline FidelityResult xxz_fidelity(double delta_aniso, double delta, std::int64_t N,
                                   OmegaBranch branch = OmegaBranch::signed_cos) {
  if (N < 2) throw domain_error("xxz_fidelity: requires N >= 2");
  const double log_w = xxz_log_omega(delta_aniso, delta, branch);
  const double log_f = 0.5 * static_cast<double>(N - 1) * log_w;
  int ell = 0;  // stays 0 unless N = 3^(ell+1) exactly
  for (std::int64_t p = 3, e = 0; p <= N; p *= 3, ++e) {
    if (p == N) { ell = static_cast<int>(e); break; }
    if (p > N / 3) break;
  }
  return make_fidelity_result(log_f, static_cast<double>(N) * std::abs(delta), ell);
}

struct XxzChi {
  bool divergent;  // |Delta| = 1: chi = rate / (1 - Delta^2) diverges
  double value;    // +inf when divergent
  double rate;     // 6(N-1)/(2 Delta + 4)^2, the one-sided divergence rate
};

inline XxzChi xxz_susceptibility(double delta_aniso, std::int64_t N) {
  if (!(std::abs(delta_aniso) <= 1.0))
    throw domain_error("xxz_susceptibility: requires |Delta| <= 1");
  if (N < 2) throw domain_error("xxz_susceptibility: requires N >= 2");
  const double d24 = 2.0 * delta_aniso + 4.0;
  const double rate = 6.0 * static_cast<double>(N - 1) / (d24 * d24);
  if (std::abs(delta_aniso) == 1.0)
    return XxzChi{true, std::numeric_limits<double>::infinity(), rate};
  return XxzChi{false, rate / (1.0 - delta_aniso * delta_aniso), rate};
}

}  // namespace qrgf
