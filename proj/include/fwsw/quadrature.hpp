#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwsw/matrix.hpp"

namespace fwsw {

enum class NodeFamily { GaussRadauRight, GaussLobatto, GaussLegendre };

inline const char* to_string(NodeFamily f) {
  switch (f) {
    case NodeFamily::GaussRadauRight: return "radau";
    case NodeFamily::GaussLobatto: return "lobatto";
    case NodeFamily::GaussLegendre: return "legendre";
  }
  return "?";
}

inline NodeFamily node_family_from_string(const std::string& s) {
  if (s == "radau") return NodeFamily::GaussRadauRight;
  if (s == "lobatto") return NodeFamily::GaussLobatto;
  if (s == "legendre") return NodeFamily::GaussLegendre;
  throw std::invalid_argument("unknown node family: " + s);
}

namespace detail {

// Legendre polynomial P_n and its derivative at x.
inline std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    const double pn = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = pn;
  }
  const double dp = n * (pm1 - x * p) / (1.0 - x * x);
  return {p, dp};
}

// Interior roots of f on (-1, 1), located by sign-change bracketing on a
// uniform grid followed by bisection to machine precision.
template <class F>
std::vector<double> bracketed_roots(const F& f, int expected, double lo, double hi) {
  const int grid = std::max(4000, 400 * expected * expected);
  std::vector<double> roots;
  double xprev = lo, fprev = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / grid;
    const double fx = f(x);
    if (fprev == 0.0) {
      roots.push_back(xprev);
    } else if (fprev * fx < 0.0) {
      double a = xprev, b = x, fa = fprev;
      for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a));
           ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    xprev = x;
    fprev = fx;
  }
  if (static_cast<int>(roots.size()) != expected)
    throw std::runtime_error("node search found " + std::to_string(roots.size()) +
                             " roots, expected " + std::to_string(expected));
  return roots;
}

// Nodes on the reference interval [-1, 1], ascending.
inline std::vector<double> reference_nodes(NodeFamily family, int m) {
  switch (family) {
    case NodeFamily::GaussLegendre: {
      auto f = [m](double x) { return legendre(m, x).first; };
      return bracketed_roots(f, m, -1.0 + 1e-9, 1.0 - 1e-9);
    }
    case NodeFamily::GaussLobatto: {
      if (m < 2)
        throw std::invalid_argument("Lobatto nodes require M >= 2");
      std::vector<double> nodes{-1.0};
      if (m > 2) {
        auto f = [m](double x) { return legendre(m - 1, x).second; };
        auto interior = bracketed_roots(f, m - 2, -1.0 + 1e-9, 1.0 - 1e-9);
        nodes.insert(nodes.end(), interior.begin(), interior.end());
      }
      nodes.push_back(1.0);
      return nodes;
    }
    case NodeFamily::GaussRadauRight: {
      // Right endpoint plus the roots of (P_{M-1} - P_M)/(1 - x).
      std::vector<double> nodes;
      if (m < 1)
        throw std::invalid_argument("Radau nodes require M >= 1");
      if (m > 1) {
        auto f = [m](double x) {
          return (legendre(m - 1, x).first - legendre(m, x).first) / (1.0 - x);
        };
        nodes = bracketed_roots(f, m - 1, -1.0 + 1e-9, 1.0 - 1e-6);
      }
      nodes.push_back(1.0);
      return nodes;
    }
  }
  throw std::invalid_argument("unknown node family");
}

}  // namespace detail

/// Gauss-Legendre reference rule on [-1, 1] (nodes and weights).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre_reference(int npoints) {
  GaussLegendreRule rule;
  rule.nodes = detail::reference_nodes(NodeFamily::GaussLegendre, npoints);
  rule.weights.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    const auto [p, dp] = detail::legendre(npoints, rule.nodes[i]);
    (void)p;
    rule.weights[i] = 2.0 / ((1.0 - rule.nodes[i] * rule.nodes[i]) * dp * dp);
  }
  return rule;
}

/// Collocation nodes of the requested family mapped affinely to
/// [t_start, t_end].
inline std::vector<double> make_nodes(NodeFamily family, int m, double t_start,
                                      double t_end) {
  if (m < 1) throw std::invalid_argument("make_nodes: M >= 1 required");
  if (!(t_end > t_start))
    throw std::invalid_argument("make_nodes: t_end must exceed t_start");
  auto ref = detail::reference_nodes(family, m);
  std::vector<double> nodes(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    nodes[i] = t_start + 0.5 * (ref[i] + 1.0) * (t_end - t_start);
  return nodes;
}

/// One time step's collocation data. The matrices Q, S, Qfast, Qslow and the
/// end-update weights q_end are all normalized by the step length, so they
/// depend only on the node family and M.
struct QuadratureRule {
  NodeFamily family = NodeFamily::GaussRadauRight;
  int M = 0;
  double t_start = 0.0, t_end = 1.0;
  std::vector<double> taus;   // node times in [t_start, t_end]
  std::vector<double> dtau;   // dtau[0] = taus[0] - t_start
  RMatrix Q;                  // q_{m,j} / dt
  RMatrix S;                  // node-to-node differences of Q rows
  RMatrix Qfast;              // lower-triangular implicit-Euler matrix
  RMatrix Qslow;              // strictly lower explicit-Euler matrix
  std::vector<double> q_end;  // end-update weights / dt

  double dt() const { return t_end - t_start; }
  bool right_end_is_node() const {
    return std::abs(taus.back() - t_end) <= 1e-12 * std::max(1.0, std::abs(t_end));
  }
  double unit_dtau(int m) const { return dtau[m] / dt(); }
  double unit_tau(int m) const { return (taus[m] - t_start) / dt(); }

  /// Same nodes and matrices, remapped to a different interval.
  QuadratureRule rescaled(double new_start, double new_end) const {
    QuadratureRule r = *this;
    const double scale = (new_end - new_start) / dt();
    r.t_start = new_start;
    r.t_end = new_end;
    for (int m = 0; m < M; ++m) {
      r.taus[m] = new_start + (taus[m] - t_start) * scale;
      r.dtau[m] = dtau[m] * scale;
    }
    return r;
  }
};

namespace detail {

// Lagrange basis polynomial l_j for the given nodes, evaluated at x.
inline double lagrange_basis(const std::vector<double>& nodes, std::size_t j,
                             double x) {
  double p = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i == j) continue;
    p *= (x - nodes[i]) / (nodes[j] - nodes[i]);
  }
  return p;
}

}  // namespace detail

inline QuadratureRule make_rule(NodeFamily family, int m, double t_start,
                                double t_end) {
  QuadratureRule rule;
  rule.family = family;
  rule.M = m;
  rule.t_start = t_start;
  rule.t_end = t_end;
  rule.taus = make_nodes(family, m, t_start, t_end);
  rule.dtau.resize(m);
  rule.dtau[0] = rule.taus[0] - t_start;
  for (int i = 1; i < m; ++i) rule.dtau[i] = rule.taus[i] - rule.taus[i - 1];

  const double dt = t_end - t_start;
  // Each entry integrates a degree M-1 Lagrange polynomial, which the
  // embedded Gauss-Legendre rule evaluates exactly.
  const GaussLegendreRule embedded = gauss_legendre_reference((m + 1) / 2 + 1);
  auto integrate_basis = [&](std::size_t j, double a, double b) {
    double acc = 0.0;
    for (std::size_t q = 0; q < embedded.nodes.size(); ++q) {
      const double x = a + 0.5 * (embedded.nodes[q] + 1.0) * (b - a);
      acc += embedded.weights[q] * detail::lagrange_basis(rule.taus, j, x);
    }
    return acc * 0.5 * (b - a);
  };

  rule.Q = RMatrix(m, m);
  for (int row = 0; row < m; ++row)
    for (int j = 0; j < m; ++j)
      rule.Q(row, j) = integrate_basis(j, t_start, rule.taus[row]) / dt;

  rule.q_end.resize(m);
  for (int j = 0; j < m; ++j)
    rule.q_end[j] = integrate_basis(j, t_start, t_end) / dt;

  rule.S = RMatrix(m, m);
  for (int j = 0; j < m; ++j) {
    rule.S(0, j) = rule.Q(0, j);
    for (int row = 1; row < m; ++row)
      rule.S(row, j) = rule.Q(row, j) - rule.Q(row - 1, j);
  }

  rule.Qfast = RMatrix(m, m);
  rule.Qslow = RMatrix(m, m);
  for (int row = 0; row < m; ++row)
    for (int j = 0; j < m; ++j) {
      if (j <= row) rule.Qfast(row, j) = rule.dtau[j] / dt;
      if (j < row) rule.Qslow(row, j) = rule.dtau[j] / dt;
    }
  return rule;
}

/// Max over [-1, 1] of the sum of |Lagrange basis| for the rule's nodes,
/// located by dense sampling.
inline double lebesgue_constant(const QuadratureRule& rule) {
  std::vector<double> ref(rule.M);
  for (int j = 0; j < rule.M; ++j)
    ref[j] = 2.0 * (rule.taus[j] - rule.t_start) / rule.dt() - 1.0;
  const int samples = 200000;
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / samples;
    double s = 0.0;
    for (int j = 0; j < rule.M; ++j)
      s += std::abs(detail::lagrange_basis(ref, static_cast<std::size_t>(j), x));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace fwsw
