#pragma once

#include <complex>
#include <vector>

#include "fwsw/gmres.hpp"
#include "fwsw/matrix.hpp"
#include "fwsw/quadrature.hpp"
#include "fwsw/state.hpp"

namespace fwsw {

/// Dense solve of the collocation system (I - dt Q (x) A) U = U0 for a
/// linear right-hand side with matrix A. Returns the M stage vectors.
inline std::vector<CVec> solve_collocation_dense(const CVec& u0, const CMatrix& a,
                                                 const QuadratureRule& rule,
                                                 double dt) {
  const std::size_t n = u0.size();
  const int m = rule.M;
  CMatrix sys(m * n, m * n);
  for (int row = 0; row < m; ++row)
    for (int col = 0; col < m; ++col) {
      const Complex w = -dt * rule.Q(row, col);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          sys(row * n + i, col * n + j) = w * a(i, j);
    }
  for (std::size_t i = 0; i < static_cast<std::size_t>(m) * n; ++i)
    sys(i, i) += 1.0;

  std::vector<Complex> rhs(m * n);
  for (int row = 0; row < m; ++row)
    for (std::size_t i = 0; i < n; ++i) rhs[row * n + i] = u0[i];
  const auto x = lu_solve(sys, rhs);

  std::vector<CVec> stages(m, CVec(n));
  for (int row = 0; row < m; ++row)
    for (std::size_t i = 0; i < n; ++i) stages[row][i] = x[row * n + i];
  return stages;
}

/// Matrix-free collocation solve for PDE-scale linear systems: the operator
/// applies f = f_fast + f_slow through the supplied callable.
template <class ApplyFull>
std::pair<std::vector<RVec>, int> solve_collocation_gmres(
    const RVec& u0, std::size_t n, const ApplyFull& apply_full,
    const QuadratureRule& rule, double dt, const GmresConfig& cfg) {
  const int m = rule.M;
  LinearOperator<double> op;
  op.dimension = static_cast<std::size_t>(m) * n;
  op.apply = [&](const std::vector<double>& x) {
    std::vector<RVec> fx(m);
    for (int j = 0; j < m; ++j) {
      RVec xj(n);
      for (std::size_t i = 0; i < n; ++i) xj[i] = x[j * n + i];
      fx[j] = apply_full(xj);
    }
    std::vector<double> y(x);
    for (int row = 0; row < m; ++row)
      for (int j = 0; j < m; ++j) {
        const double w = dt * rule.Q(row, j);
        for (std::size_t i = 0; i < n; ++i) y[row * n + i] -= w * fx[j][i];
      }
    return y;
  };

  std::vector<double> rhs(op.dimension);
  for (int row = 0; row < m; ++row)
    for (std::size_t i = 0; i < n; ++i) rhs[row * n + i] = u0[i];
  const auto res = gmres_solve(op, rhs, rhs, cfg);
  if (res.status == GmresStatus::Breakdown)
    throw SolverError("collocation GMRES breakdown");
  std::vector<RVec> stages(m, RVec(n));
  for (int row = 0; row < m; ++row)
    for (std::size_t i = 0; i < n; ++i) stages[row][i] = res.solution[row * n + i];
  return {stages, res.iterations};
}

}  // namespace fwsw
