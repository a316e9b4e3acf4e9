#pragma once

// Exact-diagonalization oracle at desk scale. Dense Hamiltonians for the ITF
// ring and the quantum-group XXZ open chain, block-embedding extraction with
// deterministic phase fixing, and the identity checks the RG kernels rest on:
//
//   (a) isometry          T'T = 1
//   (b) scalar overlap    T'(x-) T(x+) = omega * 1, omega from the analytic kernels
//   (c) ITF S-operator    T' dT = 0 and dT' dT = D(g) * 1 (central differences)
//   plus the two-block renormalized-Hamiltonian identities for Eq.-(5)/(qj)
//   couplings.
//
// The XXZ Hamiltonian is complex symmetric, not Hermitian (the quantum-group
// boundary term -a_-(sz_1 - sz_N) with a_- = i sin(theta) is anti-Hermitian);
// its spectrum is nevertheless real, and the renormalized-Hamiltonian
// reduction that reproduces Eq. (qj) is the biorthogonal one, with left
// vectors the transposed right eigenvectors scaled by 1/(phi^T phi).
// The kept XXZ doublet sits at energy -2(1+Delta)J exactly; below the level
// crossing at Delta = -1/2 it is no longer the block ground state, which the
// report surfaces instead of hiding.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qrgf/common.hpp"
#include "qrgf/itf.hpp"
#include "qrgf/xxz.hpp"

namespace qrgf {

using DenseOperator = Eigen::MatrixXcd;
using EmbeddingMatrix = Eigen::MatrixXcd;  // block dimension x 2

inline constexpr int kMaxSpins = 14;  // desk-scale guard, dim <= 2^14

namespace ed {

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// op acting on site i of n spins; site 0 owns the most significant bit,
// bit value 1 is the sz = -1 state.
inline DenseOperator site_operator(const Eigen::Matrix2cd& op, int i, int n) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    if (k == i)
      out = kron(out, op);
    else
      out = kron(out, DenseOperator::Identity(2, 2));
  }
  return out;
}

inline double hermiticity_defect(const DenseOperator& H) {
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

inline double symmetry_defect(const DenseOperator& H) {
  return (H - H.transpose()).cwiseAbs().maxCoeff();
}

inline DenseOperator traceless(const DenseOperator& H) {
  return H - (H.trace() / static_cast<double>(H.rows())) *
                 DenseOperator::Identity(H.rows(), H.cols());
}

}  // namespace ed

// H = -J sum_i (sz_i sz_{i+1} + g sx_i), periodic, site N+1 = 1.
// N = 2 is rejected: the periodic closure would double-count the single bond.
inline DenseOperator build_itf_hamiltonian(double J, double g, int N) {
  if (!(J > 0.0)) throw domain_error("build_itf_hamiltonian: requires J > 0");
  if (!(g >= 0.0)) throw domain_error("build_itf_hamiltonian: requires g >= 0");
  if (N < 3 || N > kMaxSpins)
    throw domain_error("build_itf_hamiltonian: requires 3 <= N <= 14 (periodic)");
  const auto sx = ed::pauli_x(), sz = ed::pauli_z();
  const Eigen::Index dim = Eigen::Index{1} << N;
  DenseOperator H = DenseOperator::Zero(dim, dim);
  for (int i = 0; i < N; ++i) {
    H -= J * (ed::site_operator(sz, i, N) * ed::site_operator(sz, (i + 1) % N, N));
    H -= J * g * ed::site_operator(sx, i, N);
  }
  return H;
}

// Two-site block with the field on site 1 only: h = -J(sz sz + g sx_1).
inline DenseOperator build_itf_block(double J, double g) {
  if (!(J > 0.0)) throw domain_error("build_itf_block: requires J > 0");
  if (!(g >= 0.0)) throw domain_error("build_itf_block: requires g >= 0");
  const auto sx = ed::pauli_x(), sz = ed::pauli_z();
  return -J * (ed::kron(sz, sz) + g * ed::kron(sx, Eigen::Matrix2cd::Identity()));
}

// H = J sum_{i=1}^{N-1} [sx sx + sy sy + a+ sz sz - a-(sz_i - sz_{i+1})],
// a+- = (q +- 1/q)/2, q = e^{i arccos(Delta)}. The a- pieces telescope to the
// surface term -a-(sz_1 - sz_N).
inline DenseOperator build_xxz_hamiltonian(double J, double delta_aniso, int N) {
  if (!(J > 0.0)) throw domain_error("build_xxz_hamiltonian: requires J > 0");
  if (!(std::abs(delta_aniso) <= 1.0))
    throw domain_error("build_xxz_hamiltonian: requires |Delta| <= 1");
  if (N < 3 || N > 12) throw domain_error("build_xxz_hamiltonian: requires 3 <= N <= 12");
  const double theta = std::acos(delta_aniso);
  const std::complex<double> a_plus(std::cos(theta), 0.0);
  const std::complex<double> a_minus(0.0, std::sin(theta));
  const auto sx = ed::pauli_x(), sy = ed::pauli_y(), sz = ed::pauli_z();
  const Eigen::Index dim = Eigen::Index{1} << N;
  DenseOperator H = DenseOperator::Zero(dim, dim);
  for (int i = 0; i + 1 < N; ++i) {
    H += ed::site_operator(sx, i, N) * ed::site_operator(sx, i + 1, N);
    H += ed::site_operator(sy, i, N) * ed::site_operator(sy, i + 1, N);
    H += a_plus * (ed::site_operator(sz, i, N) * ed::site_operator(sz, i + 1, N));
    H -= a_minus * (ed::site_operator(sz, i, N) - ed::site_operator(sz, i + 1, N));
  }
  return J * H;
}

namespace ed {

// ITF block doublet from the 4x4 block, via the sx-product-basis parity
// sectors {uu,dd} and {ud,du}. Columns ordered (phi1, phi2), phases fixed so
// the leading amplitude is real positive (A > 0). Returned in the z basis.
struct ItfBlockEmbedding {
  EmbeddingMatrix T;       // 4 x 2
  double energy;           // doublet energy, = -J sqrt(1+g^2)
  double degeneracy_split;
};

inline ItfBlockEmbedding itf_block_embedding(double J, double g) {
  const DenseOperator hb = build_itf_block(J, g);
  Eigen::Matrix2cd W;  // z -> x single-site basis change
  W << 1, 1, 1, -1;
  W /= std::sqrt(2.0);
  const DenseOperator W2 = kron(W, W);
  const DenseOperator hx = W2.adjoint() * hb * W2;  // x-product basis: uu,ud,du,dd
  const std::array<std::array<int, 2>, 2> sectors = {{{0, 3}, {1, 2}}};
  EmbeddingMatrix Tx = EmbeddingMatrix::Zero(4, 2);
  double e[2];
  for (int s = 0; s < 2; ++s) {
    Eigen::Matrix2cd sub;
    sub << hx(sectors[s][0], sectors[s][0]), hx(sectors[s][0], sectors[s][1]),
        hx(sectors[s][1], sectors[s][0]), hx(sectors[s][1], sectors[s][1]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(sub);
    Eigen::Vector2cd v = es.eigenvectors().col(0);
    const std::complex<double> lead = v(0);
    v *= std::abs(lead) / lead;  // leading amplitude real positive
    Tx(sectors[s][0], s) = v(0);
    Tx(sectors[s][1], s) = v(1);
    e[s] = es.eigenvalues()(0);
  }
  return ItfBlockEmbedding{W2 * Tx, 0.5 * (e[0] + e[1]), std::abs(e[0] - e[1])};
}

// XXZ three-site kept doublet. Per-sector (total sz = +-1/2) diagonalization
// of the complex-symmetric block; the doublet is selected by its exact energy
// -2(1+Delta)J, which is the sector minimum only above the Delta = -1/2
// crossing. Phase fixed on the middle amplitude (real positive).
struct XxzBlockEmbedding {
  EmbeddingMatrix T;              // 8 x 2, right eigenvectors, unit 2-norm
  double energy;                  // doublet energy
  double degeneracy_split;        // |E(+1/2) - E(-1/2)|
  std::complex<double> t_norm;    // phi^T phi (biorthogonal normalization)
  bool doublet_is_ground;         // false below the Delta = -1/2 crossing
};

inline XxzBlockEmbedding xxz_block_embedding(double J, double delta_aniso) {
  const DenseOperator hb = build_xxz_hamiltonian(J, delta_aniso, 3);
  const double target = -2.0 * (1.0 + delta_aniso) * J;
  // index bit = 1 marks sz = -1; sector basis indices sorted ascending, the
  // middle amplitude (|+-+> resp. |-+->) sits at position 1
  const std::array<std::array<int, 3>, 2> sectors = {{{1, 2, 4}, {3, 5, 6}}};
  EmbeddingMatrix T = EmbeddingMatrix::Zero(8, 2);
  double e[2];
  for (int s = 0; s < 2; ++s) {
    Eigen::Matrix3cd sub;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) sub(a, b) = hb(sectors[s][a], sectors[s][b]);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(sub);
    int best = 0;
    double gap2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const double d = std::abs(es.eigenvalues()(k) - target);
      if (d < gap2) { gap2 = d; best = k; }
    }
    // the doublet must be isolated within its sector
    double isolation = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
      if (k != best) isolation = std::min(isolation, std::abs(es.eigenvalues()(k) - es.eigenvalues()(best)));
    if (isolation < 1e-8)
      throw domain_error("xxz_block_embedding: degeneracy-resolution failure (doublet collides with another level)");
    Eigen::Vector3cd v = es.eigenvectors().col(best);
    v /= v.norm();
    const std::complex<double> mid = v(1);
    if (std::abs(mid) < 1e-12)
      throw domain_error("xxz_block_embedding: degeneracy-resolution failure (vanishing middle amplitude)");
    v *= std::abs(mid) / mid;
    for (int a = 0; a < 3; ++a) T(sectors[s][a], s) = v(a);
    e[s] = es.eigenvalues()(best).real();
  }
  const std::complex<double> t_norm = (T.col(0).transpose() * T.col(0))(0, 0);
  const bool is_ground = delta_aniso >= -0.5;
  return XxzBlockEmbedding{std::move(T), 0.5 * (e[0] + e[1]), std::abs(e[0] - e[1]), t_norm,
                           is_ground};
}

inline EmbeddingMatrix block_embedding(Model model, double x) {
  return model == Model::itf ? itf_block_embedding(1.0, x).T : xxz_block_embedding(1.0, x).T;
}

}  // namespace ed

struct CheckResult {
  std::string name;
  double tolerance;
  double measured;
  bool pass;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string name, double tol, double measured) {
    checks.push_back(CheckResult{std::move(name), tol, measured, measured <= tol});
  }
};

// Checks (a), (b) and, for ITF, (c), against the analytic kernels.
inline VerificationReport verify_embedding_identities(
    Model model, double x, double delta, OmegaBranch branch = OmegaBranch::signed_cos) {
  VerificationReport rep;
  const double xm = x - delta, xp = x + delta;

  if (model == Model::itf) {
    if (!(x - std::abs(delta) >= 0.0))
      throw domain_error("verify_embedding_identities: requires g - |delta| >= 0");
    const auto em = ed::itf_block_embedding(1.0, xm);
    const auto ep = ed::itf_block_embedding(1.0, xp);
    const auto ec = ed::itf_block_embedding(1.0, x);
    rep.add("doublet_degeneracy", 1e-10,
            std::max({em.degeneracy_split, ep.degeneracy_split, ec.degeneracy_split}));
    rep.add("isometry", 1e-12,
            std::max({(em.T.adjoint() * em.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(),
                      (ep.T.adjoint() * ep.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(),
                      (ec.T.adjoint() * ec.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff()}));
    const Eigen::Matrix2cd O = em.T.adjoint() * ep.T;
    const double omega = std::exp(itf_block_overlap(x, delta));
    rep.add("scalar_overlap_offdiag", 1e-10,
            std::max(std::abs(O(0, 1)), std::abs(O(1, 0))));
    rep.add("scalar_overlap_diag_agreement", 1e-12, std::abs(O(0, 0) - O(1, 1)));
    rep.add("scalar_overlap_matches_analytic", 1e-10,
            (O - omega * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    // (c): central differences, step 1e-5, with a two-step Richardson check
    const double h = 1e-5;
    auto dT = [&](double step) {
      return ((ed::itf_block_embedding(1.0, x + step).T -
               ed::itf_block_embedding(1.0, x - step).T) /
              (2.0 * step)).eval();
    };
    const EmbeddingMatrix d1 = dT(h), d2 = dT(0.5 * h);
    rep.add("t_dagger_dt_vanishes", 1e-6, (ec.T.adjoint() * d1).cwiseAbs().maxCoeff());
    rep.add("dt_dagger_dt_is_d_factor", 1e-6,
            (d1.adjoint() * d1 - itf_d_factor(x) * Eigen::Matrix2cd::Identity())
                .cwiseAbs()
                .maxCoeff());
    rep.add("derivative_richardson_consistency", 1e-6,
            (d1.adjoint() * d1 - d2.adjoint() * d2).cwiseAbs().maxCoeff());
    return rep;
  }

  if (!(std::abs(xm) <= 1.0 && std::abs(xp) <= 1.0))
    throw domain_error("verify_embedding_identities: requires |Delta +- delta| <= 1");
  const auto em = ed::xxz_block_embedding(1.0, xm);
  const auto ep = ed::xxz_block_embedding(1.0, xp);
  const auto ec = ed::xxz_block_embedding(1.0, x);
  rep.add("doublet_degeneracy", 1e-10,
          std::max({em.degeneracy_split, ep.degeneracy_split, ec.degeneracy_split}));
  rep.add("isometry", 1e-12,
          std::max({(em.T.adjoint() * em.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(),
                    (ep.T.adjoint() * ep.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(),
                    (ec.T.adjoint() * ec.T - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff()}));
  const Eigen::Matrix2cd O = em.T.adjoint() * ep.T;
  const double omega = xxz_omega(x, delta, branch);
  rep.add("scalar_overlap_offdiag", 1e-10, std::max(std::abs(O(0, 1)), std::abs(O(1, 0))));
  rep.add("scalar_overlap_diag_agreement", 1e-12, std::abs(O(0, 0) - O(1, 1)));
  rep.add("scalar_overlap_matches_analytic", 1e-10,
          (O - omega * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
  if (!ec.doublet_is_ground)
    rep.notes.push_back("kept doublet is excited for Delta < -1/2 (block ground space is the 2*Delta quadruplet)");
  return rep;
}

// Two-block renormalized-Hamiltonian identity.
//
// ITF (4 sites, Hermitian): T'(H^B + H^BB)T against the coarse operator in the
// dual frame, -J1 (2 X'X' + g1 (Z'1 + Z'2)), couplings from the flow; the
// additive shift must equal the block ground energy 2 E0 = -2 J sqrt(1+g^2).
//
// XXZ (6 sites, complex symmetric): biorthogonal reduction T_L H T_R with
// T_L = T_R^T / (phi^T phi) per block, against J1 h'(Delta) on two coarse
// sites, J1 from the Delta-invariant flow.
inline VerificationReport verify_renormalized_hamiltonian(Model model, double x) {
  VerificationReport rep;
  if (model == Model::itf) {
    if (!(x >= 0.0)) throw domain_error("verify_renormalized_hamiltonian: requires g >= 0");
    const double J = 1.0;
    const int n = 4;
    const auto sx = ed::pauli_x(), sz = ed::pauli_z();
    auto S = [&](const Eigen::Matrix2cd& op, int i) { return ed::site_operator(op, i, n); };
    DenseOperator H = DenseOperator::Zero(16, 16);
    // blocks (0,1), (2,3); field on block site 1 inside, partner field in H^BB
    H -= J * (S(sz, 0) * S(sz, 1) + x * S(sx, 0));
    H -= J * (S(sz, 2) * S(sz, 3) + x * S(sx, 2));
    H -= J * (S(sz, 1) * S(sz, 2) + x * S(sx, 1));
    H -= J * (S(sz, 3) * S(sz, 0) + x * S(sx, 3));
    const auto emb = ed::itf_block_embedding(J, x);
    const DenseOperator T = ed::kron(emb.T, emb.T);
    const DenseOperator Heff = T.adjoint() * H * T;
    const ItfCouplings flowed = itf_rg_step(ItfCouplings(J, x));
    DenseOperator target = -flowed.J * (2.0 * ed::kron(sx, sx) +
                                        flowed.g * (ed::kron(sz, Eigen::Matrix2cd::Identity()) +
                                                    ed::kron(Eigen::Matrix2cd::Identity(), sz)));
    rep.add("renormalized_couplings_traceless", 1e-10,
            (ed::traceless(Heff) - ed::traceless(target)).cwiseAbs().maxCoeff());
    const double shift = ((Heff - target).trace() / 4.0).real();
    rep.add("constant_shift_matches_block_energy", 1e-10,
            std::abs(shift - (-2.0 * J * std::hypot(1.0, x))));
    return rep;
  }

  if (!(std::abs(x) <= 1.0))
    throw domain_error("verify_renormalized_hamiltonian: requires |Delta| <= 1");
  if (x == -0.5)
    throw pole_error("verify_renormalized_hamiltonian: J-flow pole at Delta = -1/2");
  const double J = 1.0;
  const DenseOperator H = build_xxz_hamiltonian(J, x, 6);
  const auto emb = ed::xxz_block_embedding(J, x);
  const DenseOperator TR = ed::kron(emb.T, emb.T);
  const DenseOperator TL =
      ed::kron(emb.T.transpose(), emb.T.transpose()) / (emb.t_norm * emb.t_norm);
  const DenseOperator Heff = TL * H * TR;
  const XxzCouplings flowed = xxz_rg_step(XxzCouplings(J, x));
  // coarse two-site h with the same Delta
  const double theta = std::acos(x);
  const std::complex<double> a_plus(std::cos(theta), 0.0), a_minus(0.0, std::sin(theta));
  const auto sxm = ed::pauli_x(), sym = ed::pauli_y(), szm = ed::pauli_z();
  DenseOperator h2 = ed::kron(sxm, sxm) + ed::kron(sym, sym) +
                     a_plus * ed::kron(szm, szm) -
                     a_minus * (ed::kron(szm, Eigen::Matrix2cd::Identity()) -
                                ed::kron(Eigen::Matrix2cd::Identity(), szm));
  const DenseOperator coarse = flowed.J * h2;
  rep.add("renormalized_couplings_traceless", 1e-10,
          (ed::traceless(Heff) - ed::traceless(coarse)).cwiseAbs().maxCoeff());
  rep.add("left_right_biorthonormality", 1e-12,
          (TL * TR - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff());
  if (!emb.doublet_is_ground)
    rep.notes.push_back("kept doublet is excited for Delta < -1/2");
  return rep;
}

// |<Phi0(x-)|Phi0(x+)>| from dense ground states; degenerate ground spaces
// (split below 1e-10 relative) are compared through the largest singular
// value of the overlap block.
inline double ed_ground_fidelity(Model model, double x, double delta, int N) {
  const double J = 1.0;
  auto ground_space = [&](double coupling) -> DenseOperator {
    if (model == Model::itf) {
      const DenseOperator H = build_itf_hamiltonian(J, coupling, N);
      Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
      const auto& w = es.eigenvalues();
      const double tol = 1e-10 * std::max(1.0, std::abs(w(0)));
      Eigen::Index k = 1;
      while (k < w.size() && w(k) - w(0) < tol) ++k;
      return es.eigenvectors().leftCols(k);
    }
    const DenseOperator H = build_xxz_hamiltonian(J, coupling, N);
    Eigen::ComplexEigenSolver<DenseOperator> es(H);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    const double e0 = es.eigenvalues()(order[0]).real();
    const double tol = 1e-10 * std::max(1.0, std::abs(e0));
    DenseOperator cols(H.rows(), H.rows());
    Eigen::Index k = 0;
    for (auto idx : order) {
      if (es.eigenvalues()(idx).real() - e0 >= tol) break;
      cols.col(k++) = es.eigenvectors().col(idx);
    }
    // orthonormalize the collected ground basis
    Eigen::HouseholderQR<DenseOperator> qr(cols.leftCols(k));
    DenseOperator Q = qr.householderQ() * DenseOperator::Identity(H.rows(), k);
    return Q;
  };
  const DenseOperator Vm = ground_space(x - delta);
  const DenseOperator Vp = ground_space(x + delta);
  const DenseOperator O = Vm.adjoint() * Vp;
  Eigen::JacobiSVD<DenseOperator> svd(O);
  return svd.singularValues()(0);
}

}  // namespace qrgf
