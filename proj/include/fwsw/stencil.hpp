#pragma once

#include <complex>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

namespace fwsw {

/// Finite-difference weights for the given derivative order at offset 0
/// (Fornberg's recursion). Offsets are in grid units; the caller applies
/// the 1/dx^order scaling.
inline std::vector<double> fd_weights(const std::vector<int>& offsets,
                                      int derivative_order) {
  const std::size_t n = offsets.size();
  if (n < static_cast<std::size_t>(derivative_order) + 1)
    throw std::invalid_argument("fd_weights: need at least order+1 offsets");
  if (std::set<int>(offsets.begin(), offsets.end()).size() != n)
    throw std::invalid_argument("fd_weights: duplicate offsets");

  const int m = derivative_order;
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

enum class StencilBias { Centered, Upwind };

struct Stencil1D {
  std::vector<int> offsets;
  std::vector<double> weights;
  int order = 0;
  StencilBias bias = StencilBias::Centered;
};

/// Centered first-derivative stencil of the given (even) accuracy order.
inline Stencil1D make_centered_first_derivative(int order) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("centered stencil order must be even and >= 2");
  Stencil1D s;
  for (int j = -order / 2; j <= order / 2; ++j) s.offsets.push_back(j);
  s.weights = fd_weights(s.offsets, 1);
  s.order = order;
  s.bias = StencilBias::Centered;
  return s;
}

/// Upwind-biased first-derivative stencil: for positive wind the support
/// leans one point into the upwind direction.
inline Stencil1D make_upwind_first_derivative(int order, int wind_sign) {
  if (order < 1) throw std::invalid_argument("upwind stencil order must be >= 1");
  Stencil1D s;
  const int width = order + 1;
  int left;
  if (width % 2 == 0)
    left = wind_sign > 0 ? -width / 2 : -width / 2 + 1;
  else
    left = -(width - 1) / 2;
  for (int j = left; j < left + width; ++j) s.offsets.push_back(j);
  s.weights = fd_weights(s.offsets, 1);
  s.order = order;
  s.bias = StencilBias::Upwind;
  return s;
}

/// Dimensionless symbol sum_j w_j e^{i j theta}; dividing by dx gives the
/// semi-discrete replacement for the exact derivative factor i kappa.
inline std::complex<double> stencil_symbol(const Stencil1D& s, double theta) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < s.offsets.size(); ++j)
    acc += s.weights[j] *
           std::exp(std::complex<double>{0.0, theta * s.offsets[j]});
  return acc;
}

}  // namespace fwsw
