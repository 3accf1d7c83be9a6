#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fwsw/matrix.hpp"

namespace fwsw {

/// Matrix-free linear map on vectors of a fixed dimension.
template <class T>
struct LinearOperator {
  std::size_t dimension = 0;
  std::function<std::vector<T>(const std::vector<T>&)> apply;
};

struct GmresConfig {
  double tolerance = 1e-5;  // relative residual target
  int restart = 10;
  int max_iters = 10000;
};

enum class GmresStatus { Converged, MaxIterations, Breakdown };

template <class T>
struct GmresResult {
  std::vector<T> solution;
  int iterations = 0;  // Krylov steps across all restarts
  GmresStatus status = GmresStatus::Converged;
  double relative_residual = 0.0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
T dotc(const std::vector<T>& a, const std::vector<T>& b) {
  T acc{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<T, Complex>)
      acc += std::conj(a[i]) * b[i];
    else
      acc += a[i] * b[i];
  }
  return acc;
}

template <class T>
double norm2(const std::vector<T>& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace detail

/// Restarted GMRES with modified Gram-Schmidt and one re-orthogonalization
/// pass. Convergence is declared against the true residual, recomputed at
/// the end of each cycle.
template <class T>
GmresResult<T> gmres_solve(const LinearOperator<T>& op, const std::vector<T>& rhs,
                           const std::vector<T>& x0, const GmresConfig& cfg) {
  if (op.dimension != rhs.size() || op.dimension != x0.size())
    throw std::invalid_argument("gmres_solve: dimension mismatch");
  if (cfg.restart < 1 || !(cfg.tolerance > 0.0))
    throw std::invalid_argument("gmres_solve: invalid config");

  const std::size_t n = op.dimension;
  GmresResult<T> out;
  out.solution = x0;

  const double bnorm = detail::norm2(rhs);
  if (bnorm == 0.0) {
    out.solution.assign(n, T{});
    return out;
  }

  const int m = cfg.restart;
  std::vector<std::vector<T>> basis;
  Matrix<T> hess(static_cast<std::size_t>(m) + 1, static_cast<std::size_t>(m));
  std::vector<double> c(m + 1);
  std::vector<T> s(m + 1), g(m + 1);

  while (true) {
    std::vector<T> r = op.apply(out.solution);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    const double beta = detail::norm2(r);
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= cfg.tolerance) {
      out.status = GmresStatus::Converged;
      return out;
    }
    if (out.iterations >= cfg.max_iters) {
      out.status = GmresStatus::MaxIterations;
      return out;
    }

    basis.assign(1, r);
    for (auto& v : basis[0]) v /= beta;
    std::fill(g.begin(), g.end(), T{});
    g[0] = T{beta};

    int j = 0;
    bool broke_down = false;
    while (j < m && out.iterations < cfg.max_iters) {
      std::vector<T> w = op.apply(basis[j]);
      ++out.iterations;
      for (int i = 0; i <= j; ++i) {
        const T hij = detail::dotc(basis[i], w);
        hess(i, j) = hij;
        for (std::size_t k = 0; k < n; ++k) w[k] -= hij * basis[i][k];
      }
      for (int i = 0; i <= j; ++i) {
        const T corr = detail::dotc(basis[i], w);
        hess(i, j) += corr;
        for (std::size_t k = 0; k < n; ++k) w[k] -= corr * basis[i][k];
      }
      const double hnext = detail::norm2(w);
      hess(j + 1, j) = T{hnext};

      // Apply previous Givens rotations to the new column.
      for (int i = 0; i < j; ++i) {
        const T a = hess(i, j), b = hess(i + 1, j);
        hess(i, j) = c[i] * a + s[i] * b;
        if constexpr (std::is_same_v<T, Complex>)
          hess(i + 1, j) = -std::conj(s[i]) * a + c[i] * b;
        else
          hess(i + 1, j) = -s[i] * a + c[i] * b;
      }
      {
        const T f = hess(j, j), hb = hess(j + 1, j);
        const double af = std::abs(f), ab = std::abs(hb);
        if (ab == 0.0) {
          c[j] = 1.0;
          s[j] = T{};
        } else if (af == 0.0) {
          c[j] = 0.0;
          if constexpr (std::is_same_v<T, Complex>)
            s[j] = std::conj(hb) / ab;
          else
            s[j] = hb / ab;
        } else {
          const double denom = std::hypot(af, ab);
          c[j] = af / denom;
          if constexpr (std::is_same_v<T, Complex>)
            s[j] = (f / af) * std::conj(hb) / denom;
          else
            s[j] = (f / af) * hb / denom;
        }
        hess(j, j) = c[j] * f + s[j] * hb;
        hess(j + 1, j) = T{};
        const T a = g[j];
        g[j] = c[j] * a;
        if constexpr (std::is_same_v<T, Complex>)
          g[j + 1] = -std::conj(s[j]) * a;
        else
          g[j + 1] = -s[j] * a;
      }
      ++j;

      const double est = std::abs(g[j]) / bnorm;
      if (hnext <= 1e-14 * bnorm) {
        // Arnoldi breakdown: the Krylov space is exhausted. Either the
        // current estimate already converged or the iteration is stuck.
        broke_down = est > cfg.tolerance;
        break;
      }
      if (est <= cfg.tolerance) break;
      if (j < m) {
        basis.push_back(w);
        for (auto& v : basis[j]) v /= hnext;
      }
    }

    // Back-substitute the triangularized least-squares system.
    std::vector<T> y(j);
    for (int i = j - 1; i >= 0; --i) {
      T acc = g[i];
      for (int k = i + 1; k < j; ++k) acc -= hess(i, k) * y[k];
      y[i] = acc / hess(i, i);
    }
    for (int i = 0; i < j; ++i)
      for (std::size_t k = 0; k < n; ++k) out.solution[k] += y[i] * basis[i][k];

    if (broke_down) {
      std::vector<T> rr = op.apply(out.solution);
      for (std::size_t i = 0; i < n; ++i) rr[i] = rhs[i] - rr[i];
      out.relative_residual = detail::norm2(rr) / bnorm;
      out.status = out.relative_residual <= cfg.tolerance ? GmresStatus::Converged
                                                          : GmresStatus::Breakdown;
      return out;
    }
  }
}

}  // namespace fwsw
