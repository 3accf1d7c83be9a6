#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fwsw/gmres.hpp"
#include "fwsw/sdc.hpp"
#include "fwsw/state.hpp"
#include "fwsw/stencil.hpp"

namespace fwsw {

/// 1-D acoustic-advection system on the periodic unit interval, advection
/// explicit (fifth-order upwind), acoustics implicit (sixth-order centered).
/// State layout: (u_0..u_{N-1}, p_0..p_{N-1}).
class AcousticAdvection {
 public:
  using State = RVec;

  AcousticAdvection(std::size_t n, double advection_speed, double sound_speed,
                    GmresConfig inner = GmresConfig{})
      : n_(n),
        advection_speed_(advection_speed),
        sound_speed_(sound_speed),
        inner_(inner),
        advective_(make_upwind_first_derivative(5, advection_speed >= 0 ? 1 : -1)),
        acoustic_(make_centered_first_derivative(6)) {
    if (n_ < advective_.offsets.size() || n_ < acoustic_.offsets.size())
      throw std::invalid_argument("grid too small for the stencils");
  }

  std::size_t dimension() const { return 2 * n_; }
  std::size_t grid_size() const { return n_; }
  double dx() const { return 1.0 / static_cast<double>(n_); }
  double x(std::size_t i) const { return static_cast<double>(i) / n_; }
  double advection_speed() const { return advection_speed_; }
  double sound_speed() const { return sound_speed_; }

  State eval_slow(const State& s) const {
    State out(2 * n_);
    derivative(s, 0, advective_, -advection_speed_, out, 0);
    derivative(s, n_, advective_, -advection_speed_, out, n_);
    return out;
  }

  State eval_fast(const State& s) const {
    State out(2 * n_);
    // u_t = -c_s p_x, p_t = -c_s u_x.
    derivative(s, n_, acoustic_, -sound_speed_, out, 0);
    derivative(s, 0, acoustic_, -sound_speed_, out, n_);
    return out;
  }

  State eval_full(const State& s) const { return eval_fast(s) + eval_slow(s); }

  ImplicitResult<State> solve_implicit(double alpha, const State& rhs,
                                       double tol) const {
    if (alpha == 0.0) return {rhs, 0};
    LinearOperator<double> op;
    op.dimension = 2 * n_;
    op.apply = [this, alpha](const std::vector<double>& x) {
      const State fx = eval_fast(State(x));
      std::vector<double> y(x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= alpha * fx[i];
      return y;
    };
    GmresConfig cfg = inner_;
    cfg.tolerance = std::max(tol, 1e-14);
    const auto res = gmres_solve(op, rhs.v, rhs.v, cfg);
    if (res.status == GmresStatus::Breakdown)
      throw SolverError("acoustic implicit solve: GMRES breakdown");
    if (res.status == GmresStatus::MaxIterations)
      throw SolverError("acoustic implicit solve: GMRES out of iterations");
    return {State(res.solution), res.iterations};
  }

  static State pack(const std::vector<double>& u, const std::vector<double>& p) {
    State s(u.size() + p.size());
    for (std::size_t i = 0; i < u.size(); ++i) s[i] = u[i];
    for (std::size_t i = 0; i < p.size(); ++i) s[u.size() + i] = p[i];
    return s;
  }

 private:
  void derivative(const State& s, std::size_t src_off, const Stencil1D& st,
                  double factor, State& out, std::size_t dst_off) const {
    const double scale = factor * static_cast<double>(n_);  // 1/dx
    const int nn = static_cast<int>(n_);
    for (int i = 0; i < nn; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < st.offsets.size(); ++k) {
        const int idx = (i + st.offsets[k] % nn + nn) % nn;
        acc += st.weights[k] * s[src_off + idx];
      }
      out[dst_off + i] = scale * acc;
    }
  }

  std::size_t n_;
  double advection_speed_, sound_speed_;
  GmresConfig inner_;
  Stencil1D advective_, acoustic_;
};

inline double wrap_unit(double x) { return x - std::floor(x); }

/// Exact solution for initial data u = 0, p = p0: two counter-propagating
/// characteristics advected at U +- c_s on the periodic unit interval.
inline std::pair<std::vector<double>, std::vector<double>> exact_acoustic_advection(
    const std::function<double(double)>& p0, double advection_speed,
    double sound_speed, double t, std::size_t n) {
  std::vector<double> u(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double right = p0(wrap_unit(x - (advection_speed + sound_speed) * t));
    const double left = p0(wrap_unit(x - (advection_speed - sound_speed) * t));
    u[i] = 0.5 * right - 0.5 * left;
    p[i] = 0.5 * right + 0.5 * left;
  }
  return {u, p};
}

constexpr double kMultiscaleSigma = 0.1;
constexpr double kMultiscaleCarrier = 7.2 * M_PI;
constexpr double kMultiscaleSlowCenter = 0.75;
constexpr double kMultiscaleFastCenter = 0.25;

inline double min_image(double x, double center) {
  const double d = x - center;
  return d - std::round(d);
}

/// Gaussian p0 at x = 0.75 plus a modulated packet p1 at x = 0.25 with
/// u = p, producing a purely rightward travelling solution.
inline RVec multiscale_initial_data(std::size_t n) {
  std::vector<double> u(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double d0 = min_image(x, kMultiscaleSlowCenter);
    const double d1 = min_image(x, kMultiscaleFastCenter);
    const double slow = std::exp(-d0 * d0 / (kMultiscaleSigma * kMultiscaleSigma));
    const double fast =
        std::exp(-d1 * d1 / (kMultiscaleSigma * kMultiscaleSigma)) *
        std::cos(kMultiscaleCarrier * d1 / kMultiscaleSigma);
    p[i] = slow + fast;
    u[i] = p[i];
  }
  return AcousticAdvection::pack(u, p);
}

/// Smooth two-mode profile used by the convergence study.
inline double sine_profile(double x) {
  return std::sin(2.0 * M_PI * x) + std::sin(5.0 * M_PI * x);
}

}  // namespace fwsw
