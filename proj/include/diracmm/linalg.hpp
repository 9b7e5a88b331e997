#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace diracmm {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(size_t n, size_t m) {
  return Matrix(n, std::vector<double>(m, 0.0));
}

namespace linalg {

using LMatrix = std::vector<std::vector<long double>>;

inline LMatrix widen(const Matrix &a) {
  LMatrix out(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    out[i].assign(a[i].begin(), a[i].end());
  return out;
}

/// Cholesky S = L L^T; throws if S is not numerically positive-definite.
inline LMatrix cholesky(const LMatrix &s) {
  const size_t n = s.size();
  LMatrix l(n, std::vector<long double>(n, 0.0L));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      long double sum = s[i][j];
      for (size_t k = 0; k < j; ++k)
        sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0L))
          throw std::runtime_error(
              "cholesky: overlap matrix is not positive-definite");
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

/// Cyclic Jacobi eigensolver for a symmetric matrix; eigenvalues
/// ascending, eigenvectors in rows of `vec`.
inline void jacobi_eigen(LMatrix a, std::vector<long double> &eval,
                         LMatrix &vec) {
  const size_t n = a.size();
  vec.assign(n, std::vector<long double>(n, 0.0L));
  for (size_t i = 0; i < n; ++i)
    vec[i][i] = 1.0L;
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0.0L, diag = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      diag += std::abs(a[i][i]);
      for (size_t j = i + 1; j < n; ++j)
        off += std::abs(a[i][j]);
    }
    if (off <= 1e-18L * std::max(diag, 1.0L))
      break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0L)
          continue;
        const long double theta = (a[q][q] - a[p][p]) / (2.0L * a[p][q]);
        const long double t =
            (theta >= 0.0L ? 1.0L : -1.0L) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L);
        const long double s = t * c;
        for (size_t i = 0; i < n; ++i) {
          const long double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (size_t i = 0; i < n; ++i) {
          const long double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (size_t i = 0; i < n; ++i) {
          const long double vpi = vec[p][i], vqi = vec[q][i];
          vec[p][i] = c * vpi - s * vqi;
          vec[q][i] = s * vpi + c * vqi;
        }
      }
    }
  }
  eval.resize(n);
  for (size_t i = 0; i < n; ++i)
    eval[i] = a[i][i];
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return eval[i] < eval[j]; });
  std::vector<long double> ev(n);
  LMatrix vv(n);
  for (size_t i = 0; i < n; ++i) {
    ev[i] = eval[order[i]];
    vv[i] = vec[order[i]];
  }
  eval = std::move(ev);
  vec = std::move(vv);
}

struct GeneralizedEigenL {
  std::vector<long double> eigenvalues; // ascending
  LMatrix vectors;                      // S-orthonormal, by row
  long double s_condition;
};

struct GeneralizedEigen {
  std::vector<double> eigenvalues;          // ascending
  std::vector<std::vector<double>> vectors; // S-orthonormal, by row
  double s_condition;
};

/// Symmetric-definite generalized problem H v = eps S v by congruence
/// through the Cholesky factor of S; all arithmetic in long double.
inline GeneralizedEigenL generalized_eigen_l(const LMatrix &H,
                                             const LMatrix &S,
                                             double cond_limit = 1e12) {
  const size_t n = H.size();
  GeneralizedEigenL out;
  // Condition estimate of S through its own Jacobi spectrum.
  {
    std::vector<long double> sev;
    LMatrix svec;
    jacobi_eigen(S, sev, svec);
    if (!(sev.front() > 0.0L) ||
        (double)(sev.back() / sev.front()) > cond_limit)
      throw std::runtime_error(
          "generalized_eigen: overlap matrix singular or ill-conditioned");
    out.s_condition = sev.back() / sev.front();
  }
  LMatrix l = cholesky(S);
  // A = L^-1 H L^-T: forward solve L X = H (column-wise) ...
  LMatrix x(n, std::vector<long double>(n));
  for (size_t col = 0; col < n; ++col) {
    for (size_t i = 0; i < n; ++i) {
      long double sum = H[i][col];
      for (size_t k = 0; k < i; ++k)
        sum -= l[i][k] * x[k][col];
      x[i][col] = sum / l[i][i];
    }
  }
  // ... then A L^T = X, row-wise solves with L.
  LMatrix a(n, std::vector<long double>(n));
  for (size_t row = 0; row < n; ++row) {
    for (size_t j = 0; j < n; ++j) {
      long double sum = x[row][j];
      for (size_t k = 0; k < j; ++k)
        sum -= l[j][k] * a[row][k];
      a[row][j] = sum / l[j][j];
    }
  }
  LMatrix w;
  jacobi_eigen(a, out.eigenvalues, w);
  // back-transform: v = L^-T w
  out.vectors.assign(n, std::vector<long double>(n));
  for (size_t r = 0; r < n; ++r) {
    auto &v = out.vectors[r];
    for (size_t ii = 0; ii < n; ++ii) {
      const size_t i = n - 1 - ii;
      long double sum = w[r][i];
      for (size_t k = i + 1; k < n; ++k)
        sum -= l[k][i] * v[k];
      v[i] = sum / l[i][i];
    }
    // Renormalize against S: the triangular solves leave a norm error of
    // order cond(L) ulp, which downstream projector weights amplify.
    long double vsv = 0.0L;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        vsv += v[i] * S[i][j] * v[j];
    const long double scale = 1.0L / std::sqrt(vsv);
    for (size_t i = 0; i < n; ++i)
      v[i] *= scale;
  }
  return out;
}

inline GeneralizedEigen generalized_eigen(const Matrix &H, const Matrix &S,
                                          double cond_limit = 1e12) {
  const GeneralizedEigenL r = generalized_eigen_l(widen(H), widen(S),
                                                  cond_limit);
  GeneralizedEigen out;
  out.eigenvalues.assign(r.eigenvalues.begin(), r.eigenvalues.end());
  out.vectors.assign(r.vectors.size(), {});
  for (size_t i = 0; i < r.vectors.size(); ++i)
    out.vectors[i].assign(r.vectors[i].begin(), r.vectors[i].end());
  out.s_condition = (double)r.s_condition;
  return out;
}

} // namespace linalg
} // namespace diracmm
