#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "diracmm/constants.hpp"
#include "diracmm/integrals.hpp"
#include "diracmm/linalg.hpp"
#include "diracmm/radial.hpp"

namespace diracmm {

struct BasisSet {
  std::vector<Orbital> uppers;
  std::vector<Orbital> lowers;
};

/// Dirac blocks over a finite basis. Huu/Hll carry +-mc^2 on the
/// diagonal plus the potential; Hul is the c sigma.p coupling.
struct MatrixBlocks {
  Matrix Huu, Hul, Hll;
  Matrix Suu, Sll;
};

struct SpectrumClassification {
  std::vector<int> negative_branch; // eps < 0
  std::vector<int> gap;             // 0 <= eps < mc^2
  std::vector<int> positive_branch; // eps >= mc^2
};

/// Lowers are the normalized sigma.p images of the uppers.
inline BasisSet kinetic_balance_basis(const std::vector<Orbital> &uppers) {
  BasisSet out;
  out.uppers = uppers;
  out.lowers.reserve(uppers.size());
  for (const auto &u : uppers) {
    Orbital g = sigma_p_apply(u);
    const double n = std::sqrt(overlap(g.radial, g.radial));
    out.lowers.push_back(Orbital{g.radial.scaled(1.0 / n), g.channel});
  }
  return out;
}

inline MatrixBlocks build_blocks(const BasisSet &basis, PotentialSpec V,
                                 const Constants &k = {}) {
  const size_t nu = basis.uppers.size();
  const size_t nl = basis.lowers.size();
  if (nu == 0)
    throw std::domain_error("build_blocks: empty upper basis");
  for (size_t i = 1; i < nu; ++i)
    if (basis.uppers[i].channel.kappa != basis.uppers[0].channel.kappa)
      throw std::domain_error("build_blocks: mixed kappa in upper block");
  for (size_t i = 1; i < nl; ++i)
    if (basis.lowers[i].channel.kappa != basis.lowers[0].channel.kappa)
      throw std::domain_error("build_blocks: mixed kappa in lower block");

  MatrixBlocks b;
  b.Suu = zeros(nu, nu);
  b.Huu = zeros(nu, nu);
  b.Sll = zeros(nl, nl);
  b.Hll = zeros(nl, nl);
  b.Hul = zeros(nu, nl);
  const double mc2 = k.mc2();
  for (size_t i = 0; i < nu; ++i)
    for (size_t j = 0; j < nu; ++j) {
      const double s = overlap(basis.uppers[i].radial, basis.uppers[j].radial);
      b.Suu[i][j] = s;
      b.Huu[i][j] =
          mc2 * s +
          potential_element(basis.uppers[i].radial, basis.uppers[j].radial, V);
    }
  for (size_t i = 0; i < nl; ++i)
    for (size_t j = 0; j < nl; ++j) {
      const double s = overlap(basis.lowers[i].radial, basis.lowers[j].radial);
      b.Sll[i][j] = s;
      b.Hll[i][j] =
          -mc2 * s +
          potential_element(basis.lowers[i].radial, basis.lowers[j].radial, V);
    }
  const bool coupled =
      nl > 0 &&
      basis.lowers[0].channel.kappa == -basis.uppers[0].channel.kappa;
  for (size_t i = 0; i < nu; ++i) {
    const Orbital g = sigma_p_apply(basis.uppers[i]);
    for (size_t j = 0; j < nl; ++j)
      b.Hul[i][j] =
          coupled ? k.c * overlap(g.radial, basis.lowers[j].radial) : 0.0;
  }
  return b;
}

inline size_t block_dim(const MatrixBlocks &b) {
  return b.Suu.size() + b.Sll.size();
}

inline Matrix assemble_full(const MatrixBlocks &b, bool shifted,
                            const Constants &k = {}) {
  const size_t nu = b.Suu.size(), nl = b.Sll.size(), n = nu + nl;
  const double shift = shifted ? k.mc2() : 0.0;
  Matrix H = zeros(n, n);
  for (size_t i = 0; i < nu; ++i)
    for (size_t j = 0; j < nu; ++j)
      H[i][j] = b.Huu[i][j] - shift * b.Suu[i][j];
  for (size_t i = 0; i < nl; ++i)
    for (size_t j = 0; j < nl; ++j)
      H[nu + i][nu + j] = b.Hll[i][j] - shift * b.Sll[i][j];
  for (size_t i = 0; i < nu; ++i)
    for (size_t j = 0; j < nl; ++j) {
      H[i][nu + j] = b.Hul[i][j];
      H[nu + j][i] = b.Hul[i][j];
    }
  return H;
}

inline Matrix assemble_overlap(const MatrixBlocks &b) {
  const size_t nu = b.Suu.size(), nl = b.Sll.size(), n = nu + nl;
  Matrix S = zeros(n, n);
  for (size_t i = 0; i < nu; ++i)
    for (size_t j = 0; j < nu; ++j)
      S[i][j] = b.Suu[i][j];
  for (size_t i = 0; i < nl; ++i)
    for (size_t j = 0; j < nl; ++j)
      S[nu + i][nu + j] = b.Sll[i][j];
  return S;
}

struct DiagonalizationResult {
  std::vector<double> eigenvalues;         // ascending, rest mass included
  std::vector<double> eigenvalues_shifted; // eps - mc^2, computed directly
  std::vector<std::vector<double>> eigenvectors; // S-orthonormal, by row
  SpectrumClassification classification;
};

/// Full generalized diagonalization. Internally solved on H - mc^2 S so
/// the shifted eigenvalues keep absolute accuracy when c is large.
inline DiagonalizationResult diagonalize(const MatrixBlocks &blocks,
                                         const Constants &k = {}) {
  const Matrix H = assemble_full(blocks, /*shifted=*/true, k);
  const Matrix S = assemble_overlap(blocks);
  linalg::GeneralizedEigen ge = linalg::generalized_eigen(H, S);
  DiagonalizationResult out;
  out.eigenvalues_shifted = ge.eigenvalues;
  out.eigenvectors = std::move(ge.vectors);
  const double mc2 = k.mc2();
  out.eigenvalues.reserve(ge.eigenvalues.size());
  for (double e : ge.eigenvalues)
    out.eigenvalues.push_back(e + mc2);
  for (size_t i = 0; i < out.eigenvalues.size(); ++i) {
    const double eps = out.eigenvalues[i];
    if (eps < 0.0)
      out.classification.negative_branch.push_back((int)i);
    else if (eps < mc2)
      out.classification.gap.push_back((int)i);
    else
      out.classification.positive_branch.push_back((int)i);
  }
  return out;
}

/// Energy-dependent partitioned problem
///   [Huu + Hul (eps Sll - Hll)^-1 Hlu] c = eps Suu c,
/// solved for the root_index-th gap root by fixed-point iteration with a
/// secant acceleration on eps.
inline double partitioned_minmax(const MatrixBlocks &blocks, int root_index,
                                 const Constants &k = {}) {
  const size_t nu = blocks.Suu.size(), nl = blocks.Sll.size();
  if (root_index < 0 || (size_t)root_index >= nu)
    throw std::domain_error("partitioned_minmax: root_index out of range");
  const double mc2 = k.mc2();

  auto effective_root = [&](double eps) {
    // M = eps Sll - Hll must stay positive-definite in the gap.
    linalg::LMatrix m(nl, std::vector<long double>(nl));
    for (size_t i = 0; i < nl; ++i)
      for (size_t j = 0; j < nl; ++j)
        m[i][j] = (long double)eps * blocks.Sll[i][j] - blocks.Hll[i][j];
    linalg::LMatrix l = linalg::cholesky(m);
    // X = M^-1 Hlu via two triangular solves; Heff = Huu + Hul X.
    linalg::LMatrix rhs(nl, std::vector<long double>(nu));
    for (size_t i = 0; i < nl; ++i)
      for (size_t j = 0; j < nu; ++j)
        rhs[i][j] = blocks.Hul[j][i];
    linalg::LMatrix y(nl, std::vector<long double>(nu));
    for (size_t col = 0; col < nu; ++col)
      for (size_t i = 0; i < nl; ++i) {
        long double sum = rhs[i][col];
        for (size_t kk = 0; kk < i; ++kk)
          sum -= l[i][kk] * y[kk][col];
        y[i][col] = sum / l[i][i];
      }
    linalg::LMatrix x(nl, std::vector<long double>(nu));
    for (size_t col = 0; col < nu; ++col)
      for (size_t ii = 0; ii < nl; ++ii) {
        const size_t i = nl - 1 - ii;
        long double sum = y[i][col];
        for (size_t kk = i + 1; kk < nl; ++kk)
          sum -= l[kk][i] * x[kk][col];
        x[i][col] = sum / l[i][i];
      }
    Matrix heff = zeros(nu, nu);
    for (size_t i = 0; i < nu; ++i)
      for (size_t j = 0; j < nu; ++j) {
        long double sum = blocks.Huu[i][j];
        for (size_t kk = 0; kk < nl; ++kk)
          sum += blocks.Hul[i][kk] * x[kk][j];
        heff[i][j] = (double)sum;
      }
    linalg::GeneralizedEigen ge = linalg::generalized_eigen(heff, blocks.Suu);
    return ge.eigenvalues[root_index];
  };

  double e0 = 0.999 * mc2;
  double g0 = effective_root(e0) - e0;
  double e1 = e0 + g0; // one fixed-point step
  for (int it = 0; it < 100; ++it) {
    const double g1 = effective_root(e1) - e1;
    if (std::abs(g1) < 1e-13 * mc2)
      return e1 + g1;
    double e2;
    if (g1 != g0 && std::isfinite(g1 - g0))
      e2 = e1 - g1 * (e1 - e0) / (g1 - g0);
    else
      e2 = e1 + g1;
    e0 = e1;
    g0 = g1;
    e1 = e2;
  }
  throw std::runtime_error(
      "partitioned_minmax: no convergence within 100 iterations");
}

/// Phillips-Kleinman negative-energy pseudopotential at matrix level:
/// H + sum_neg (S v)(E_g - eps) (S v)^T, from the diagonalization of H.
namespace detail {

// H + V^NEPP in extended precision throughout: the projector weights are
// of order 2 mc^2, so eigenvector errors get amplified by ~7.5e4 a.u.
// `shifted` selects H - mc^2 S as the base.
inline linalg::LMatrix nepp_build_l(const MatrixBlocks &blocks, double E_g,
                                    bool shifted, const Constants &k) {
  const linalg::LMatrix S = linalg::widen(assemble_overlap(blocks));
  const linalg::LMatrix Hs =
      linalg::widen(assemble_full(blocks, /*shifted=*/true, k));
  const linalg::GeneralizedEigenL ge = linalg::generalized_eigen_l(Hs, S);
  linalg::LMatrix H = linalg::widen(assemble_full(blocks, shifted, k));
  const size_t n = H.size();
  const long double mc2 = (long double)k.mc2();
  for (size_t idx = 0; idx < n; ++idx) {
    const long double eps = ge.eigenvalues[idx] + mc2;
    if (!(eps < 0.0L))
      continue;
    const auto &v = ge.vectors[idx];
    std::vector<long double> sv(n, 0.0L);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        sv[i] += S[i][j] * v[j];
    const long double w = (long double)E_g - eps;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        H[i][j] += sv[i] * w * sv[j];
  }
  return H;
}

} // namespace detail

inline Matrix nepp_apply(const MatrixBlocks &blocks, double E_g,
                         const Constants &k = {}) {
  const linalg::LMatrix H =
      detail::nepp_build_l(blocks, E_g, /*shifted=*/false, k);
  const size_t n = H.size();
  Matrix out = zeros(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      out[i][j] = (double)H[i][j];
  return out;
}

/// Ascending spectrum of H + V^NEPP, solved without leaving extended
/// precision (the shifted base keeps absolute accuracy at mc^2 scale).
inline std::vector<double> nepp_spectrum(const MatrixBlocks &blocks,
                                         double E_g, const Constants &k = {}) {
  const linalg::LMatrix H =
      detail::nepp_build_l(blocks, E_g, /*shifted=*/true, k);
  const linalg::LMatrix S = linalg::widen(assemble_overlap(blocks));
  const linalg::GeneralizedEigenL ge = linalg::generalized_eigen_l(H, S);
  std::vector<double> out;
  out.reserve(ge.eigenvalues.size());
  for (long double e : ge.eigenvalues)
    out.push_back((double)(e + (long double)k.mc2()));
  return out;
}

/// Blocks for the sign-flipped potential (Z -> -Z) without touching the
/// rest-mass diagonal; used by the charge-conjugation symmetry check.
inline MatrixBlocks flip_potential_sign(const MatrixBlocks &b,
                                        const Constants &k = {}) {
  MatrixBlocks out = b;
  const double mc2 = k.mc2();
  for (size_t i = 0; i < b.Suu.size(); ++i)
    for (size_t j = 0; j < b.Suu.size(); ++j)
      out.Huu[i][j] = 2.0 * mc2 * b.Suu[i][j] - b.Huu[i][j];
  for (size_t i = 0; i < b.Sll.size(); ++i)
    for (size_t j = 0; j < b.Sll.size(); ++j)
      out.Hll[i][j] = -2.0 * mc2 * b.Sll[i][j] - b.Hll[i][j];
  return out;
}

struct CollapseReport {
  double exact_e1s;            // mc^2 sqrt(1 - (alpha Z)^2)
  double balanced_gap;         // lowest gap eigenvalue, balanced lowers
  double detuned_gap;          // same with detuned lowers
  double detune_factor;
  double balanced_margin;      // balanced_gap - exact_e1s
  double detuned_margin;       // detuned_gap - exact_e1s
  bool collapsed;              // detuned_gap < exact_e1s
};

inline double exact_ground_energy_shifted(PotentialSpec V,
                                          const Constants &k = {}) {
  const double x = k.alpha() * V.Z;
  if (!(x < 1.0))
    throw std::domain_error("exact ground energy: alpha*Z >= 1");
  // mc^2 (sqrt(1-x^2) - 1) without cancellation
  return -k.mc2() * x * x / (1.0 + std::sqrt(1.0 - x * x));
}

inline double exact_ground_energy(PotentialSpec V, const Constants &k = {}) {
  return k.mc2() + exact_ground_energy_shifted(V, k);
}

namespace detail {

inline double lowest_gap_shifted(const DiagonalizationResult &d,
                                 const Constants &k) {
  for (size_t i = 0; i < d.eigenvalues.size(); ++i)
    if (d.eigenvalues[i] >= 0.0 && d.eigenvalues[i] < k.mc2())
      return d.eigenvalues_shifted[i];
  throw std::runtime_error("no gap eigenvalue found");
}

} // namespace detail

/// Variation-collapse demonstration: balanced lowers versus lowers whose
/// exponents are scaled by `factor`, breaking the kinetic-balance match.
inline CollapseReport collapse_demo(const std::vector<Orbital> &uppers,
                                    PotentialSpec V, double factor,
                                    const Constants &k = {}) {
  BasisSet balanced = kinetic_balance_basis(uppers);
  BasisSet detuned = balanced;
  for (auto &l : detuned.lowers) {
    RadialFunction f = l.radial;
    for (auto &t : f.terms)
      t.zeta *= factor;
    const double n = std::sqrt(overlap(f, f));
    l.radial = f.scaled(1.0 / n);
  }
  const double exact_shift = exact_ground_energy_shifted(V, k);
  const DiagonalizationResult db = diagonalize(build_blocks(balanced, V, k), k);
  const DiagonalizationResult dd = diagonalize(build_blocks(detuned, V, k), k);
  const double bg = detail::lowest_gap_shifted(db, k);
  const double dg = detail::lowest_gap_shifted(dd, k);
  CollapseReport r;
  r.exact_e1s = exact_shift + k.mc2();
  r.balanced_gap = bg + k.mc2();
  r.detuned_gap = dg + k.mc2();
  r.detune_factor = factor;
  r.balanced_margin = bg - exact_shift;
  r.detuned_margin = dg - exact_shift;
  r.collapsed = dg < exact_shift;
  return r;
}

} // namespace diracmm
