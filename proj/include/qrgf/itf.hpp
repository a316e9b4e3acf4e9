#pragma once

// Transverse-field Ising chain, quantum RG with two-site blocks.
//
// Block ground doublet (x-basis): |phi1> = A|uu> + B|dd>, |phi2> = A|ud> + B|du>
// with A = s/sqrt(1+s^2), B = 1/sqrt(1+s^2), s = g + sqrt(1+g^2).
// One RG step: g -> g^2, J -> J * 2s/(1+s^2); chain length N = 2^(ell+1).
// The fidelity between ground states at g -+ delta is a product of per-level
// block overlaps raised to the per-level block counts; everything here is
// accumulated in log space so N up to 2^61 never underflows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qrgf/common.hpp"

namespace qrgf {

struct ItfCouplings {
  double J;
  double g;
  ItfCouplings(double J_, double g_) : J(J_), g(g_) {
    if (!(J > 0.0)) throw domain_error("ItfCouplings: requires J > 0");
    if (!(g >= 0.0)) throw domain_error("ItfCouplings: requires g >= 0");
  }
};

struct ItfBlockState {
  double s;  // g + sqrt(1+g^2), >= 1
  double A;  // s/sqrt(1+s^2)
  double B;  // 1/sqrt(1+s^2)
};

inline ItfBlockState itf_block_state(double g) {
  if (!(g >= 0.0)) throw domain_error("itf_block_state: requires g >= 0");
  const double s = g + std::hypot(1.0, g);
  const double r = std::hypot(1.0, s);
  return ItfBlockState{s, s / r, 1.0 / r};
}

namespace detail {

// phi(g) = arctan(1/s) in (0, pi/4]; A = cos(phi), B = sin(phi).
// Well defined for g = +inf (returns 0), which the g > 1 flow reaches.
inline double itf_phi(double g) { return std::atan(1.0 / (g + std::hypot(1.0, g))); }

// ln[A(gm)A(gp) + B(gm)B(gp)] = ln cos(phi(gm) - phi(gp)).
// dg = gp - gm is tracked exactly by the caller along the flow, which keeps
// the phase difference cancellation-free down to |dg| ~ 1e-300.
inline double itf_log_pair_overlap(double gm, double gp, double dg) {
  double dphi;
  if (std::max(gm, gp) < 1e8 && std::isfinite(dg)) {
    const double hm = std::hypot(1.0, gm), hp = std::hypot(1.0, gp);
    const double sm = gm + hm, sp = gp + hp;
    const double ds = dg * (1.0 + (gm + gp) / (hm + hp));  // sp - sm, exact
    dphi = std::atan(ds / (1.0 + sm * sp));  // phi(gm) - phi(gp), magnitude
  } else {
    // deep in the g > 1 flow both phis are ~1/(2g); contributions are
    // negligible and plain differencing is enough
    dphi = itf_phi(gm) - itf_phi(gp);
  }
  const double sh = std::sin(0.5 * dphi);
  return std::log1p(-2.0 * sh * sh);
}

// 2s/(1+s^2) written overflow-safe (s = +inf gives 0, not NaN).
inline double itf_j_ratio(double g) {
  const double s = g + std::hypot(1.0, g);
  return 2.0 / (s + 1.0 / s);
}

}  // namespace detail

inline ItfCouplings itf_rg_step(const ItfCouplings& c) {
  return ItfCouplings(c.J * detail::itf_j_ratio(c.g), c.g * c.g);
}

// ln[A(g-)A(g+) + B(g-)B(g+)], g+- = g +- delta. Symmetric in delta.
inline double itf_block_overlap(double g, double delta) {
  if (!(g - std::abs(delta) >= 0.0))
    throw domain_error("itf_block_overlap: requires g - |delta| >= 0");
  return detail::itf_log_pair_overlap(g - delta, g + delta, 2.0 * delta);
}

struct RgLevel {
  int level;
  double g;                   // centre coupling g^(level)
  double J;                   // renormalized J^(level), in units of the bare J
  std::int64_t block_count;   // N / 2^(level+1); the final level has exactly 1
  double log_overlap;         // per-block ln overlap at this level, <= 0
};

struct RgTrace {
  std::vector<RgLevel> levels;
  int ell;
};

struct ItfFidelity {
  FidelityResult result;
  RgTrace trace;
};

// Product formula: ln f = sum_j (N/2^(j+1)) ln w_j + ln w_ell, with the
// perturbed couplings g-- and g+ flown independently through g -> g^2.
inline ItfFidelity itf_fidelity(double g, double delta, int ell) {
  if (ell < 1 || ell > 60) throw domain_error("itf_fidelity: requires 1 <= ell <= 60");
  if (!(g - std::abs(delta) >= 0.0))
    throw domain_error("itf_fidelity: requires g - |delta| >= 0");
  const std::int64_t N = std::int64_t{1} << (ell + 1);

  double gm = g - delta, gp = g + delta, dg = 2.0 * delta;
  double gc = g, Jc = 1.0;
  double log_f = 0.0;
  RgTrace trace;
  trace.ell = ell;
  trace.levels.reserve(static_cast<std::size_t>(ell) + 1);
  for (int j = 0; j <= ell; ++j) {
    if (!(gm >= 0.0) || !(gp >= 0.0))
      throw domain_error("itf_fidelity: flow left g >= 0 domain");
    const std::int64_t count = N >> (j + 1);  // 1 at the final level
    const double lo = detail::itf_log_pair_overlap(gm, gp, dg);
    trace.levels.push_back(RgLevel{j, gc, Jc, count, lo});
    log_f += static_cast<double>(count) * lo;
    dg *= gm + gp;  // gp^2 - gm^2, before squaring
    gm *= gm;
    gp *= gp;
    Jc *= detail::itf_j_ratio(gc);
    gc *= gc;
  }
  const double n_delta = static_cast<double>(N) * std::abs(delta);
  return ItfFidelity{make_fidelity_result(log_f, n_delta, ell), std::move(trace)};
}

// (1+sqrt(2))/sqrt(4+2*sqrt(2)) = cos(pi/8): the double-limit value at g = 1.
inline double itf_limit_constant() {
  return (1.0 + std::sqrt(2.0)) / std::sqrt(4.0 + 2.0 * std::sqrt(2.0));
}

// Pointwise double limit of f: 1 everywhere except exactly at g = 1.
inline double itf_fidelity_thermo_limit(double g) {
  if (!(g >= 0.0)) throw domain_error("itf_fidelity_thermo_limit: requires g >= 0");
  return g == 1.0 ? itf_limit_constant() : 1.0;
}

// Tolerance-based variant for plotting a resolvable dip.
inline double itf_fidelity_thermo_limit_tol(double g, double tol) {
  if (!(g >= 0.0)) throw domain_error("itf_fidelity_thermo_limit_tol: requires g >= 0");
  if (!(tol >= 0.0)) throw domain_error("itf_fidelity_thermo_limit_tol: requires tol >= 0");
  return std::abs(g - 1.0) <= tol ? itf_limit_constant() : 1.0;
}

// D(g) = s^2/[(1+g^2)(1+s^2)^2] = (dphi/dg)^2; the per-block second-order
// overlap coefficient.
inline double itf_d_factor(double g) {
  if (!(g >= 0.0)) throw domain_error("itf_d_factor: requires g >= 0");
  const double h = std::hypot(1.0, g);
  const double s = g + h;
  const double r = s / (1.0 + s * s);
  return (r / h) * (r / h);
}

enum class ItfChiMode {
  fd_calibrated,  // exact second-order coefficient of the shipped f (default)
  printed         // literal chi^(l) + N sum D(g^(j))/2^(j-1) assembly
};

struct ItfChi {
  double total;
  double boundary;                  // single-block (level-ell) term
  std::vector<double> level_terms;  // bulk contributions, level by level
  ItfChiMode mode;
};

namespace detail {

// ln D(e^L), asymptotics-safe for |L| beyond double range of g itself.
inline double itf_log_d(double L) {
  if (std::abs(L) < 300.0) return std::log(itf_d_factor(std::exp(L)));
  if (L < 0.0) return std::log(0.25);     // g -> 0: D -> 1/4
  return -2.0 * std::log(2.0) - 4.0 * L;  // g -> inf: D ~ 1/(4 g^4)
}

}  // namespace detail

// chi(g; N=2^(ell+1)) with f ~ 1 - (delta^2/2) chi.
//
// fd_calibrated: chi = 4 * sum_{j=0}^{ell} count_j * c_j^2 * D(g^(j)) with the
// chain-rule factor c_j = prod_{i<j} 2 g^(i) — the exact small-delta limit of
// 2(1-f)/delta^2 for the product formula. Terms are assembled in log space;
// far from g = 1 the c_j^2 and D factors separately leave double range while
// their product stays tame.
inline ItfChi itf_susceptibility(double g, int ell, ItfChiMode mode = ItfChiMode::fd_calibrated) {
  if (!(g >= 0.0)) throw domain_error("itf_susceptibility: requires g >= 0");
  if (ell < 1 || ell > 60) throw domain_error("itf_susceptibility: requires 1 <= ell <= 60");
  const double N = std::ldexp(1.0, ell + 1);

  ItfChi out;
  out.mode = mode;
  out.level_terms.reserve(static_cast<std::size_t>(ell) + 1);

  if (mode == ItfChiMode::fd_calibrated) {
    const double L0 = g > 0.0 ? std::log(g) : -std::numeric_limits<double>::infinity();
    double log_c = 0.0;  // ln c_j
    double total = 0.0, boundary = 0.0;
    for (int j = 0; j <= ell; ++j) {
      const double Lj = g > 0.0 ? std::ldexp(L0, j) : (j == 0 ? 0.0 : -std::numeric_limits<double>::infinity());
      const double log_cnt = (ell - j) * std::log(2.0);  // count_j = 2^(ell-j)
      double log_term;
      if (g > 0.0) {
        log_term = log_cnt + 2.0 * log_c + detail::itf_log_d(Lj);
      } else {
        // flow pinned at 0: c_j = 0 for j >= 1
        log_term = j == 0 ? log_cnt + std::log(0.25) : -std::numeric_limits<double>::infinity();
      }
      const double term = 4.0 * std::exp(log_term);
      out.level_terms.push_back(term);
      total += term;
      if (j == ell) boundary = term;
      if (g > 0.0) log_c += std::log(2.0) + Lj;  // c_{j+1} = c_j * 2 g^(j)
    }
    out.total = total;
    out.boundary = boundary;
    return out;
  }

  // printed variant: boundary N * D(g^(ell)) * prod_{i=1}^{ell} g^(i-1),
  // bulk N * sum_{j=1}^{ell} D(g^(j)) / 2^(j-1)
  const double L0 = g > 0.0 ? std::log(g) : -std::numeric_limits<double>::infinity();
  double log_prod = 0.0;
  double bulk = 0.0;
  for (int j = 1; j <= ell; ++j) {
    const double Ljm1 = g > 0.0 ? std::ldexp(L0, j - 1) : -std::numeric_limits<double>::infinity();
    const double Lj = g > 0.0 ? std::ldexp(L0, j) : -std::numeric_limits<double>::infinity();
    if (g > 0.0) log_prod += Ljm1;
    const double term =
        g > 0.0 ? N * std::exp(detail::itf_log_d(Lj) - (j - 1) * std::log(2.0))
                : N * 0.25 * std::exp(-(j - 1) * std::log(2.0));
    out.level_terms.push_back(term);
    bulk += term;
  }
  const double Lell = g > 0.0 ? std::ldexp(L0, ell) : -std::numeric_limits<double>::infinity();
  out.boundary = g > 0.0 ? N * std::exp(detail::itf_log_d(Lell) + log_prod) : 0.0;
  out.total = out.boundary + bulk;
  return out;
}

enum class ItfFixedPoint { stable_zero, unstable_critical, stable_infinity, flowing };

inline const char* fixed_point_name(ItfFixedPoint c) {
  switch (c) {
    case ItfFixedPoint::stable_zero: return "stable_zero";
    case ItfFixedPoint::unstable_critical: return "unstable_critical";
    case ItfFixedPoint::stable_infinity: return "stable_infinity";
    default: return "flowing";
  }
}

// Iterate g -> g^2 until the flow settles below tol (-> 0) or above 1/tol
// (-> inf). g = 1 never moves and is the unstable critical point.
inline ItfFixedPoint itf_classify_fixed_point(double g, double tol) {
  if (!(g >= 0.0)) throw domain_error("itf_classify_fixed_point: requires g >= 0");
  if (!(tol > 0.0 && tol < 1.0))
    throw domain_error("itf_classify_fixed_point: requires 0 < tolerance < 1");
  if (g == 1.0) return ItfFixedPoint::unstable_critical;
  double x = g;
  for (int it = 0; it < 200; ++it) {
    if (x <= tol) return ItfFixedPoint::stable_zero;
    if (x >= 1.0 / tol) return ItfFixedPoint::stable_infinity;
    x *= x;
  }
  return ItfFixedPoint::flowing;
}

}  // namespace qrgf
