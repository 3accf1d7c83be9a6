#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace fwsw {

/// Thin vector wrapper giving PDE states value semantics and the small set
/// of arithmetic operations the sweep engine needs.
template <class T>
struct Vec {
  std::vector<T> v;

  Vec() = default;
  explicit Vec(std::size_t n, T value = T{}) : v(n, value) {}
  explicit Vec(std::vector<T> data) : v(std::move(data)) {}

  std::size_t size() const { return v.size(); }
  T& operator[](std::size_t i) { return v[i]; }
  const T& operator[](std::size_t i) const { return v[i]; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
  }
  template <class S>
  Vec& operator*=(S a) {
    for (auto& x : v) x = static_cast<T>(a * x);
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator-(Vec a) {
    for (auto& x : a.v) x = -x;
    return a;
  }
  template <class S>
  friend Vec operator*(S a, Vec x) {
    return x *= a;
  }
};

using RVec = Vec<double>;
using CVec = Vec<std::complex<double>>;

inline double inf_norm(double x) { return std::abs(x); }
inline double inf_norm(std::complex<double> x) { return std::abs(x); }

template <class T>
double inf_norm(const Vec<T>& a) {
  double best = 0.0;
  for (const auto& x : a.v) best = std::max(best, std::abs(x));
  return best;
}

template <class T>
void axpy(double a, const Vec<T>& x, Vec<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y.v[i] += a * x.v[i];
}

inline void axpy(double a, std::complex<double> x, std::complex<double>& y) {
  y += a * x;
}

}  // namespace fwsw
