#pragma once

#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwsw/quadrature.hpp"
#include "fwsw/state.hpp"

namespace fwsw {

template <class State>
struct ImplicitResult {
  State u;
  long iterations = 0;
};

/// Split right-hand side f = f_fast + f_slow with an implicit-solve hook for
/// u - alpha * f_fast(u) = rhs. Implementations must be deterministic; the
/// sweep engine never mutates them.
template <class Sys, class State>
concept SplitSystemFor = requires(const Sys& sys, const State& u, double alpha,
                                  double tol) {
  { sys.dimension() } -> std::convertible_to<std::size_t>;
  { sys.eval_fast(u) } -> std::convertible_to<State>;
  { sys.eval_slow(u) } -> std::convertible_to<State>;
  { sys.solve_implicit(alpha, u, tol) } -> std::convertible_to<ImplicitResult<State>>;
};

enum class UpdateMode { Quadrature, LastNode };

struct SdcConfig {
  QuadratureRule rule;
  int max_sweeps = 3;  // K
  std::optional<double> residual_tol;
  UpdateMode update_mode = UpdateMode::Quadrature;
  double inner_tol_factor = 0.1;
  double inner_tol_floor = 1e-5;

  void validate() const {
    if (max_sweeps < 1) throw std::invalid_argument("SdcConfig: K >= 1 required");
    if (!(inner_tol_factor > 0.0 && inner_tol_factor <= 1.0))
      throw std::invalid_argument("SdcConfig: inner_tol_factor in (0, 1]");
    if (update_mode == UpdateMode::LastNode && !rule.right_end_is_node())
      throw std::invalid_argument(
          "SdcConfig: last-node update requires the right endpoint as a node");
  }
};

template <class State>
struct SweepState {
  State u0;
  std::vector<State> stages;
  int sweep_count = 0;
  double residual_norm = 0.0;  // from the most recent residual evaluation
  long inner_iterations = 0;
};

struct ImplicitSolveError : std::runtime_error {
  int node;
  int sweep;
  ImplicitSolveError(int node_idx, int sweep_idx, const std::string& what)
      : std::runtime_error("implicit solve failed at node " +
                           std::to_string(node_idx) + ", sweep " +
                           std::to_string(sweep_idx) + ": " + what),
        node(node_idx),
        sweep(sweep_idx) {}
};

/// Copy u0 to all stages.
template <class State>
SweepState<State> initialize(const State& u0, int num_nodes) {
  SweepState<State> s;
  s.u0 = u0;
  s.stages.assign(static_cast<std::size_t>(num_nodes), u0);
  return s;
}

/// Per-node collocation defect r_m = u0 + dt * sum_j Q_{m,j} f(U_j) - U_m.
template <class State, class Sys>
  requires SplitSystemFor<Sys, State>
std::vector<State> residual(const SweepState<State>& state, const Sys& sys,
                            const SdcConfig& cfg) {
  const auto& rule = cfg.rule;
  const int m = rule.M;
  const double dt = rule.dt();
  std::vector<State> f(m, state.u0);
  for (int j = 0; j < m; ++j)
    f[j] = sys.eval_fast(state.stages[j]) + sys.eval_slow(state.stages[j]);
  std::vector<State> r(m, state.u0);
  for (int row = 0; row < m; ++row) {
    State acc = state.u0;
    for (int j = 0; j < m; ++j) axpy(dt * rule.Q(row, j), f[j], acc);
    r[row] = acc - state.stages[row];
  }
  return r;
}

template <class State>
double residual_norm_of(const std::vector<State>& r) {
  double best = 0.0;
  for (const auto& rm : r) best = std::max(best, inf_norm(rm));
  return best;
}

/// One IMEX sweep over all nodes: the fast part advances implicitly node by
/// node, the slow part explicitly from the previous node of the new iterate.
template <class State, class Sys>
  requires SplitSystemFor<Sys, State>
SweepState<State> sweep(const SweepState<State>& state, const Sys& sys,
                        const SdcConfig& cfg) {
  const auto& rule = cfg.rule;
  const int m = rule.M;
  const double dt = rule.dt();
  const double tol =
      std::max(cfg.inner_tol_factor * state.residual_norm, cfg.inner_tol_floor);

  std::vector<State> fast_old(m, state.u0);
  std::vector<State> slow_old(m, state.u0);
  std::vector<State> f_old(m, state.u0);
  for (int j = 0; j < m; ++j) {
    fast_old[j] = sys.eval_fast(state.stages[j]);
    slow_old[j] = sys.eval_slow(state.stages[j]);
    f_old[j] = fast_old[j] + slow_old[j];
  }

  SweepState<State> next = state;
  next.sweep_count = state.sweep_count + 1;
  State u_prev_new = state.u0;
  // Both iterates start from u0, so the slow difference vanishes at node 1.
  const State slow_u0 = sys.eval_slow(state.u0);
  State slow_prev_new = slow_u0;

  for (int node = 0; node < m; ++node) {
    const double dtau = rule.dtau[node];
    const State& slow_prev_old = node == 0 ? slow_u0 : slow_old[node - 1];
    State rhs = u_prev_new;
    axpy(-dtau, fast_old[node], rhs);
    axpy(dtau, slow_prev_new, rhs);
    axpy(-dtau, slow_prev_old, rhs);
    for (int j = 0; j < m; ++j) axpy(dt * rule.S(node, j), f_old[j], rhs);

    ImplicitResult<State> solved;
    try {
      solved = sys.solve_implicit(dtau, rhs, tol);
    } catch (const std::exception& e) {
      throw ImplicitSolveError(node + 1, next.sweep_count, e.what());
    }
    next.inner_iterations += solved.iterations;
    u_prev_new = solved.u;
    next.stages[node] = std::move(solved.u);
    if (node + 1 < m) slow_prev_new = sys.eval_slow(next.stages[node]);
  }
  return next;
}

template <class State>
struct StepResult {
  State u_next;
  int sweeps_used = 0;
  long inner_iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;   // after each sweep
  std::vector<long> inner_per_sweep;      // implicit-solver iterations per sweep
};

/// Integrate one time step of length dt: K sweeps (or until the residual
/// tolerance is met), then the end-of-step update.
template <class State, class Sys>
  requires SplitSystemFor<Sys, State>
StepResult<State> step(const State& u0, const Sys& sys, const SdcConfig& cfg,
                       double dt, double t_start = 0.0) {
  cfg.validate();
  SdcConfig local = cfg;
  local.rule = cfg.rule.rescaled(t_start, t_start + dt);
  const int m = local.rule.M;

  auto state = initialize(u0, m);
  StepResult<State> out{u0};
  for (int k = 0; k < local.max_sweeps; ++k) {
    const long before = state.inner_iterations;
    state = sweep(state, sys, local);
    out.inner_per_sweep.push_back(state.inner_iterations - before);
    state.residual_norm = residual_norm_of(residual(state, sys, local));
    out.residual_history.push_back(state.residual_norm);
    if (local.residual_tol && state.residual_norm <= *local.residual_tol) break;
  }
  out.sweeps_used = state.sweep_count;
  out.inner_iterations = state.inner_iterations;
  out.final_residual = state.residual_norm;

  if (local.update_mode == UpdateMode::LastNode) {
    out.u_next = state.stages.back();
  } else {
    State acc = u0;
    for (int j = 0; j < m; ++j) {
      const State f =
          sys.eval_fast(state.stages[j]) + sys.eval_slow(state.stages[j]);
      axpy(dt * local.rule.q_end[j], f, acc);
    }
    out.u_next = acc;
  }
  return out;
}

}  // namespace fwsw
