#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fwsw/matrix.hpp"
#include "fwsw/quadrature.hpp"
#include "fwsw/scalar_analysis.hpp"
#include "fwsw/stencil.hpp"

namespace fwsw {

enum class SpatialSymbol { Exact, CenteredFd };
enum class TimeScheme { FwswSdc, Midpoint, Bdf2 };

/// Plane-wave parameters for the acoustic-advection system: advection speed
/// U, sound speed c_s, wavenumber kappa. The spatial derivative factor
/// i*kappa can be replaced by a finite-difference symbol.
struct WaveParams {
  double advection_speed = 0.05;
  double sound_speed = 1.0;
  double kappa = 0.0;
  double dt = 1.0;
  SpatialSymbol symbol = SpatialSymbol::Exact;
  int fd_order = 2;
  double dx = 1.0;

  Complex derivative_factor() const {
    if (symbol == SpatialSymbol::Exact) return Complex{0.0, kappa};
    const Stencil1D s = make_centered_first_derivative(fd_order);
    return stencil_symbol(s, kappa * dx) / dx;
  }
};

namespace detail {

// 2x2 blocks of the Fourier-transformed right-hand side,
// d/dt (u, p) = a_fast (u, p) + a_slow (u, p).
inline void wave_blocks(const WaveParams& p, CMatrix& a_fast, CMatrix& a_slow) {
  const Complex d = p.derivative_factor();
  a_fast = CMatrix(2, 2);
  a_slow = CMatrix(2, 2);
  a_fast(0, 1) = -d * p.sound_speed;
  a_fast(1, 0) = -d * p.sound_speed;
  a_slow(0, 0) = -d * p.advection_speed;
  a_slow(1, 1) = -d * p.advection_speed;
}

}  // namespace detail

/// One-step update matrix Z of K sweeps applied to the Fourier-transformed
/// acoustic-advection system, built column by column from the unit initial
/// values (1,0) and (0,1).
inline CMatrix build_update_matrix(const WaveParams& p, const QuadratureRule& rule,
                                   int sweeps) {
  if (sweeps < 1) throw std::invalid_argument("build_update_matrix: K >= 1");
  const int m = rule.M;
  CMatrix a_fast, a_slow;
  detail::wave_blocks(p, a_fast, a_slow);
  const CMatrix a_full = a_fast + a_slow;

  const CMatrix qf = to_complex(rule.Qfast);
  const CMatrix qs = to_complex(rule.Qslow);
  const CMatrix q = to_complex(rule.Q);
  CMatrix l = CMatrix::identity(2 * m) -
              p.dt * (kron(qf, a_fast) + kron(qs, a_slow));
  CMatrix r = p.dt * (kron(q, a_full) - kron(qf, a_fast) - kron(qs, a_slow));
  const CMatrix g = detail::sweep_accumulator(l, r, sweeps);

  CMatrix z(2, 2);
  for (int basis = 0; basis < 2; ++basis) {
    std::vector<Complex> x0(2 * m, Complex{0.0});
    for (int node = 0; node < m; ++node) x0[2 * node + basis] = 1.0;
    const auto y = g.apply(x0);
    Complex out[2] = {basis == 0 ? 1.0 : 0.0, basis == 1 ? 1.0 : 0.0};
    for (int node = 0; node < m; ++node) {
      const Complex yu = y[2 * node], yp = y[2 * node + 1];
      out[0] += p.dt * rule.q_end[node] * (a_full(0, 0) * yu + a_full(0, 1) * yp);
      out[1] += p.dt * rule.q_end[node] * (a_full(1, 0) * yu + a_full(1, 1) * yp);
    }
    z(0, basis) = out[0];
    z(1, basis) = out[1];
  }
  return z;
}

/// Frequencies from the per-step update matrix: roots of
/// z^2 - tr(Z) z + det(Z) with z = e^{-i omega dt}, omega = i log(z)/dt on
/// the principal branch. A vanishing root maps to Im(omega) = -infinity.
inline std::pair<Complex, Complex> solve_dispersion(const CMatrix& z, double dt) {
  if (z.rows() != 2 || z.cols() != 2)
    throw std::invalid_argument("solve_dispersion: Z must be 2x2");
  const Complex tr = z(0, 0) + z(1, 1);
  const Complex det = z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0);
  const Complex disc = std::sqrt(tr * tr * 0.25 - det);
  Complex r1 = tr * 0.5 + disc;
  Complex r2 = tr * 0.5 - disc;
  // Evaluate the smaller root from the product to avoid cancellation.
  if (std::abs(r1) >= std::abs(r2) && std::abs(r1) > 0.0) r2 = det / r1;
  else if (std::abs(r2) > 0.0) r1 = det / r2;

  auto to_omega = [dt](Complex root) {
    if (root == Complex{0.0})
      return Complex{0.0, -std::numeric_limits<double>::infinity()};
    return Complex{0.0, 1.0} * std::log(root) / dt;
  };
  return {to_omega(r1), to_omega(r2)};
}

/// Per-wavenumber frequencies, phase speeds and per-step amplitudes of both
/// branches, tracked continuously in kappa.
struct DispersionCurve {
  std::vector<double> kappas;
  std::vector<Complex> omega1, omega2;
  std::vector<double> phase_speed1, phase_speed2;
  std::vector<double> amplification1, amplification2;  // per-step |z|
  std::vector<double> amp_exp_im1, amp_exp_im2;        // exp(Im omega)
  std::vector<bool> wrapped;          // |Re(omega) dt| at the branch cut
  std::vector<bool> near_degenerate;  // roots closer than 1e-12
};

namespace detail {

inline std::pair<Complex, Complex> comparator_frequencies(const WaveParams& p,
                                                          TimeScheme scheme) {
  const Complex d = p.derivative_factor();
  // Eigenvalues of the full right-hand side along the two wave branches.
  const Complex lambda_plus = -d * (p.advection_speed + p.sound_speed);
  const Complex lambda_minus = -d * (p.advection_speed - p.sound_speed);
  auto one_step_root = [&](Complex lambda) {
    const Complex lh = lambda * p.dt;
    if (scheme == TimeScheme::Midpoint) return (1.0 + 0.5 * lh) / (1.0 - 0.5 * lh);
    // BDF2: (3/2 - lh) z^2 - 2 z + 1/2 = 0; the principal root tends to
    // e^{lh} as dt -> 0.
    const Complex a = 1.5 - lh;
    const Complex disc = std::sqrt(4.0 - 2.0 * a);
    const Complex z1 = (2.0 + disc) / (2.0 * a);
    const Complex z2 = (2.0 - disc) / (2.0 * a);
    const Complex target = std::exp(lh);
    return std::abs(z1 - target) < std::abs(z2 - target) ? z1 : z2;
  };
  auto to_omega = [&](Complex root) {
    return Complex{0.0, 1.0} * std::log(root) / p.dt;
  };
  return {to_omega(one_step_root(lambda_plus)),
          to_omega(one_step_root(lambda_minus))};
}

}  // namespace detail

inline DispersionCurve sweep_curve(const std::vector<double>& kappas,
                                   WaveParams base, const QuadratureRule& rule,
                                   int sweeps, TimeScheme scheme) {
  if (kappas.size() < 2)
    throw std::invalid_argument("sweep_curve: need a kappa grid");
  DispersionCurve curve;
  curve.kappas = kappas;
  Complex prev1, prev2;
  bool have_prev = false;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    WaveParams p = base;
    p.kappa = kappas[i];
    Complex w1, w2;
    if (scheme == TimeScheme::FwswSdc) {
      const CMatrix z = build_update_matrix(p, rule, sweeps);
      std::tie(w1, w2) = solve_dispersion(z, p.dt);
    } else {
      std::tie(w1, w2) = detail::comparator_frequencies(p, scheme);
    }
    curve.near_degenerate.push_back(std::abs(w1 - w2) < 1e-12);

    // Assign branches by continuity; seed with the exact split
    // omega = (U +- c_s) kappa.
    Complex ref1, ref2;
    if (have_prev) {
      ref1 = prev1;
      ref2 = prev2;
    } else {
      ref1 = (base.advection_speed + base.sound_speed) * kappas[i];
      ref2 = (base.advection_speed - base.sound_speed) * kappas[i];
    }
    const double keep = std::abs(w1 - ref1) + std::abs(w2 - ref2);
    const double swap = std::abs(w2 - ref1) + std::abs(w1 - ref2);
    if (swap < keep) std::swap(w1, w2);
    prev1 = w1;
    prev2 = w2;
    have_prev = true;

    curve.omega1.push_back(w1);
    curve.omega2.push_back(w2);
    curve.phase_speed1.push_back(w1.real() / kappas[i]);
    curve.phase_speed2.push_back(w2.real() / kappas[i]);
    curve.amplification1.push_back(std::exp(w1.imag() * base.dt));
    curve.amplification2.push_back(std::exp(w2.imag() * base.dt));
    curve.amp_exp_im1.push_back(std::exp(w1.imag()));
    curve.amp_exp_im2.push_back(std::exp(w2.imag()));
    const double margin = 1e-9;
    curve.wrapped.push_back(
        std::abs(w1.real()) * base.dt > M_PI - margin ||
        std::abs(w2.real()) * base.dt > M_PI - margin);
  }
  return curve;
}

}  // namespace fwsw
