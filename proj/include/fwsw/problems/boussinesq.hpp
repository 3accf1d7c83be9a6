#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fwsw/gmres.hpp"
#include "fwsw/sdc.hpp"
#include "fwsw/state.hpp"
#include "fwsw/stencil.hpp"

namespace fwsw {

struct BoussinesqParams {
  double advection_speed = 20.0;     // m/s
  double sound_speed = 300.0;        // m/s
  double buoyancy_frequency = 0.01;  // 1/s
  double length_x = 300e3;           // m
  double length_z = 10e3;            // m
  std::size_t nx = 300;
  std::size_t nz = 30;

  void validate() const {
    if (!(advection_speed > 0 && sound_speed > 0 && buoyancy_frequency > 0 &&
          length_x > 0 && length_z > 0 && nx > 0 && nz > 0))
      throw std::invalid_argument("BoussinesqParams: all values must be positive");
  }
};

enum class ZBoundary { GhostExtension, OneSided };

/// Linearized compressible Boussinesq channel: periodic in x, no-slip walls
/// on the first and last z rows. Acoustic and gravity terms are implicit
/// (fourth-order centered derivatives), advection explicit (fifth-order
/// upwind). State layout: component-major (u, w, b, p), each nx*nz
/// row-major over (ix, iz).
class Boussinesq {
 public:
  using State = RVec;
  enum Component { U = 0, W = 1, B = 2, P = 3 };

  explicit Boussinesq(BoussinesqParams params, GmresConfig inner = GmresConfig{},
                      ZBoundary zb = ZBoundary::GhostExtension)
      : prm_(params),
        inner_(inner),
        zb_(zb),
        advective_(make_upwind_first_derivative(
            5, params.advection_speed >= 0 ? 1 : -1)),
        centered_(make_centered_first_derivative(4)) {
    prm_.validate();
    if (prm_.nx < advective_.offsets.size() || prm_.nz < 5)
      throw std::invalid_argument("Boussinesq grid too small for the stencils");
    if (zb_ == ZBoundary::OneSided) build_one_sided_rows();
  }

  const BoussinesqParams& params() const { return prm_; }
  std::size_t dimension() const { return 4 * prm_.nx * prm_.nz; }
  double dx() const { return prm_.length_x / static_cast<double>(prm_.nx); }
  double dz() const { return prm_.length_z / static_cast<double>(prm_.nz); }
  double x(std::size_t i) const { return -0.5 * prm_.length_x + i * dx(); }
  double z(std::size_t j) const { return j * dz(); }

  std::size_t index(Component c, std::size_t ix, std::size_t iz) const {
    return (static_cast<std::size_t>(c) * prm_.nx + ix) * prm_.nz + iz;
  }

  State eval_slow(const State& s) const {
    State out(dimension());
    for (int c = 0; c < 4; ++c)
      add_x_derivative(s, static_cast<Component>(c), advective_,
                       -prm_.advection_speed, out, static_cast<Component>(c));
    zero_wall_w(out);
    return out;
  }

  State eval_fast(const State& s) const {
    State out(dimension());
    const double n2 = prm_.buoyancy_frequency * prm_.buoyancy_frequency;
    const double cs2 = prm_.sound_speed * prm_.sound_speed;
    add_x_derivative(s, P, centered_, -1.0, out, U);          // u_t = -p_x
    add_z_derivative(s, P, -1.0, out, W, /*antisym=*/false);  // w_t = -p_z + b
    for (std::size_t i = 0; i < prm_.nx; ++i)
      for (std::size_t j = 0; j < prm_.nz; ++j)
        out[index(W, i, j)] += s[index(B, i, j)];
    for (std::size_t i = 0; i < prm_.nx; ++i)  // b_t = -N^2 w
      for (std::size_t j = 0; j < prm_.nz; ++j)
        out[index(B, i, j)] = -n2 * s[index(W, i, j)];
    add_x_derivative(s, U, centered_, -cs2, out, P);          // p_t = -c^2 (u_x + w_z)
    add_z_derivative(s, W, -cs2, out, P, /*antisym=*/true);
    zero_wall_w(out);
    return out;
  }

  State eval_full(const State& s) const { return eval_fast(s) + eval_slow(s); }

  ImplicitResult<State> solve_implicit(double alpha, const State& rhs,
                                       double tol) const {
    if (alpha == 0.0) return {rhs, 0};
    LinearOperator<double> op;
    op.dimension = dimension();
    op.apply = [this, alpha](const std::vector<double>& xv) {
      const State fx = eval_fast(State(xv));
      std::vector<double> y(xv);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= alpha * fx[i];
      return y;
    };
    GmresConfig cfg = inner_;
    cfg.tolerance = std::max(tol, 1e-14);
    const auto res = gmres_solve(op, rhs.v, rhs.v, cfg);
    if (res.status == GmresStatus::Breakdown)
      throw SolverError("Boussinesq implicit solve: GMRES breakdown");
    if (res.status == GmresStatus::MaxIterations)
      throw SolverError("Boussinesq implicit solve: GMRES out of iterations");
    State u(res.solution);
    zero_wall_w(u);  // no-slip after every implicit solve
    return {u, res.iterations};
  }

  void zero_wall_w(State& s) const {
    for (std::size_t i = 0; i < prm_.nx; ++i) {
      s[index(W, i, 0)] = 0.0;
      s[index(W, i, prm_.nz - 1)] = 0.0;
    }
  }

 private:
  void add_x_derivative(const State& s, Component src, const Stencil1D& st,
                        double factor, State& out, Component dst) const {
    const int nx = static_cast<int>(prm_.nx);
    const double scale = factor / dx();
    for (int i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < prm_.nz; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < st.offsets.size(); ++k) {
          const int ii = (i + st.offsets[k] + nx) % nx;
          acc += st.weights[k] * s[index(src, ii, j)];
        }
        out[index(dst, i, j)] += scale * acc;
      }
  }

  // z derivative with wall handling: ghost rows mirror the interior
  // (antisymmetric for w, symmetric for u, b, p), or one-sided stencils
  // near the walls when configured.
  void add_z_derivative(const State& s, Component src, double factor, State& out,
                        Component dst, bool antisym) const {
    const int nz = static_cast<int>(prm_.nz);
    const double scale = factor / dz();
    for (std::size_t i = 0; i < prm_.nx; ++i)
      for (int j = 0; j < nz; ++j) {
        double acc = 0.0;
        if (zb_ == ZBoundary::OneSided && (j < 2 || j >= nz - 2)) {
          const auto& row = one_sided_[j < 2 ? j : (j == nz - 2 ? 2 : 3)];
          for (std::size_t k = 0; k < row.offsets.size(); ++k)
            acc += row.weights[k] * s[index(src, i, j + row.offsets[k])];
        } else {
          for (std::size_t k = 0; k < centered_.offsets.size(); ++k) {
            int jj = j + centered_.offsets[k];
            double sign = 1.0;
            if (jj < 0) {
              jj = -jj;
              if (antisym) sign = -1.0;
            } else if (jj > nz - 1) {
              jj = 2 * (nz - 1) - jj;
              if (antisym) sign = -1.0;
            }
            acc += sign * centered_.weights[k] * s[index(src, i, jj)];
          }
        }
        out[index(dst, i, j)] += scale * acc;
      }
  }

  void build_one_sided_rows() {
    // Rows 0, 1 and nz-2, nz-1 use shifted five-point stencils of the same
    // order as the interior.
    auto make = [](int left) {
      Stencil1D s;
      for (int k = left; k < left + 5; ++k) s.offsets.push_back(k);
      s.weights = fd_weights(s.offsets, 1);
      s.order = 4;
      return s;
    };
    one_sided_ = {make(0), make(-1), make(-3), make(-4)};
  }

  BoussinesqParams prm_;
  GmresConfig inner_;
  ZBoundary zb_;
  Stencil1D advective_, centered_;
  std::vector<Stencil1D> one_sided_;  // rows 0, 1, nz-2, nz-1
};

constexpr double kGravityWaveAmplitude = 0.01;   // m/s^2
constexpr double kGravityWaveHalfWidth = 5e3;    // m
constexpr double kGravityWaveCenter = -50e3;     // m

/// Buoyancy perturbation profile: a vertical half-sine times a Lorentzian
/// centered at x = -50 km.
inline double gravity_wave_buoyancy(double x, double z,
                                    const BoussinesqParams& p) {
  const double dxc = (x - kGravityWaveCenter) / kGravityWaveHalfWidth;
  return kGravityWaveAmplitude * std::sin(M_PI * z / p.length_z) /
         (1.0 + dxc * dxc);
}

inline RVec gravity_wave_initial_data(const Boussinesq& sys) {
  RVec s(sys.dimension());
  const auto& p = sys.params();
  for (std::size_t i = 0; i < p.nx; ++i)
    for (std::size_t j = 0; j < p.nz; ++j)
      s[sys.index(Boussinesq::B, i, j)] =
          gravity_wave_buoyancy(sys.x(i), sys.z(j), p);
  return s;
}

}  // namespace fwsw
