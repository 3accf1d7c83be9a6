#pragma once

#include <optional>
#include <stdexcept>

#include "fwsw/gmres.hpp"
#include "fwsw/state.hpp"

namespace fwsw {

enum class ReferenceScheme { Midpoint, Bdf2 };

/// Implicit midpoint step (I - dt/2 A) u_{n+1} = (I + dt/2 A) u_n with the
/// full right-hand side treated implicitly.
template <class Sys>
ImplicitResult<RVec> midpoint_step(const RVec& u, const Sys& sys, double dt,
                                   const GmresConfig& cfg) {
  const RVec f = sys.eval_full(u);
  RVec rhs = u;
  axpy(0.5 * dt, f, rhs);
  LinearOperator<double> op;
  op.dimension = sys.dimension();
  op.apply = [&sys, dt](const std::vector<double>& x) {
    const RVec fx = sys.eval_full(RVec(x));
    std::vector<double> y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= 0.5 * dt * fx[i];
    return y;
  };
  const auto res = gmres_solve(op, rhs.v, u.v, cfg);
  if (res.status != GmresStatus::Converged)
    throw SolverError(res.status == GmresStatus::Breakdown
                          ? "midpoint step: GMRES breakdown"
                          : "midpoint step: GMRES out of iterations");
  return {RVec(res.solution), res.iterations};
}

/// BDF-2 step (3/2 I - dt A) u_{n+1} = 2 u_n - 1/2 u_{n-1}.
template <class Sys>
ImplicitResult<RVec> bdf2_step(const RVec& u_n, const RVec& u_prev,
                               const Sys& sys, double dt,
                               const GmresConfig& cfg) {
  RVec rhs(u_n.size());
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = (4.0 * u_n[i] - u_prev[i]) / 3.0;
  LinearOperator<double> op;
  op.dimension = sys.dimension();
  op.apply = [&sys, dt](const std::vector<double>& x) {
    const RVec fx = sys.eval_full(RVec(x));
    std::vector<double> y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= (2.0 / 3.0) * dt * fx[i];
    return y;
  };
  const auto res = gmres_solve(op, rhs.v, u_n.v, cfg);
  if (res.status != GmresStatus::Converged)
    throw SolverError(res.status == GmresStatus::Breakdown
                          ? "bdf2 step: GMRES breakdown"
                          : "bdf2 step: GMRES out of iterations");
  return {RVec(res.solution), res.iterations};
}

/// Trajectory driver for the comparator schemes. BDF-2 keeps one history
/// state and bootstraps its first step with the midpoint rule.
template <class Sys>
class LinearStepper {
 public:
  LinearStepper(ReferenceScheme scheme, const Sys& sys, double dt,
                GmresConfig cfg = GmresConfig{})
      : scheme_(scheme), sys_(sys), dt_(dt), cfg_(cfg) {}

  RVec step(const RVec& u) {
    ImplicitResult<RVec> res;
    if (scheme_ == ReferenceScheme::Midpoint || !history_) {
      res = midpoint_step(u, sys_, dt_, cfg_);
    } else {
      res = bdf2_step(u, *history_, sys_, dt_, cfg_);
    }
    if (scheme_ == ReferenceScheme::Bdf2) history_ = u;
    ++solves_;
    gmres_iterations_ += res.iterations;
    return res.u;
  }

  long solves() const { return solves_; }
  long gmres_iterations() const { return gmres_iterations_; }

 private:
  ReferenceScheme scheme_;
  const Sys& sys_;
  double dt_;
  GmresConfig cfg_;
  std::optional<RVec> history_;
  long solves_ = 0;
  long gmres_iterations_ = 0;
};

}  // namespace fwsw
