#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwsw {

using Complex = std::complex<double>;

struct SingularMatrixError : std::runtime_error {
  std::size_t pivot_index;
  explicit SingularMatrixError(std::size_t idx)
      : std::runtime_error("singular matrix: pivot " + std::to_string(idx) +
                           " below threshold"),
        pivot_index(idx) {}
};

struct EigenConvergenceError : std::runtime_error {
  EigenConvergenceError()
      : std::runtime_error("QR eigenvalue iteration did not converge") {}
};

/// Dense row-major matrix over a real or complex scalar field.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    std::vector<T> y(rows_, T{});
    for (std::size_t i = 0; i < rows_; ++i) {
      T acc{};
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix<Complex>;
using RMatrix = Matrix<double>;

inline CMatrix to_complex(const RMatrix& a) {
  CMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  return c;
}

/// Max row sum of entry moduli.
template <class T>
double inf_norm(const Matrix<T>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

template <class T>
double max_abs_entry(const Matrix<T>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      best = std::max(best, std::abs(a(i, j)));
  return best;
}

/// Kronecker product a (m x n) with b (p x q) -> (mp x nq).
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      if (aij == T{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          c(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return c;
}

/// Gauss-Jordan inverse with partial pivoting. Pivots below
/// 1e-14 * max|entry| are treated as singular.
template <class T>
Matrix<T> mat_inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("mat_inverse: not square");
  const std::size_t n = a.rows();
  const double threshold = 1e-14 * std::max(max_abs_entry(a), 1e-300);
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(m(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= threshold) throw SingularMatrixError(col);
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const T d = m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = m(r, col);
      if (f == T{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Solve a x = b by LU with partial pivoting (dense, in-place copy).
template <class T>
std::vector<T> lu_solve(Matrix<T> a, std::vector<T> b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("lu_solve: dimension mismatch");
  const std::size_t n = a.rows();
  const double threshold = 1e-14 * std::max(max_abs_entry(a), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= threshold) throw SingularMatrixError(col);
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a(r, col) / a(col, col);
      if (f == T{}) continue;
      a(r, col) = T{};
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * b[j];
    b[i] = acc / a(i, i);
  }
  return b;
}

namespace detail {

struct GivensRotation {
  double c;
  Complex s;
};

inline GivensRotation make_givens(Complex f, Complex g) {
  if (std::abs(g) == 0.0) return {1.0, Complex{0.0}};
  if (std::abs(f) == 0.0) return {0.0, std::conj(g) / std::abs(g)};
  const double denom = std::hypot(std::abs(f), std::abs(g));
  const Complex phase = f / std::abs(f);
  return {std::abs(f) / denom, phase * std::conj(g) / denom};
}

// Householder reduction to upper Hessenberg form, complex arithmetic.
inline void hessenberg_reduce(CMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
    if (scale == 0.0) continue;
    std::vector<Complex> v(n - k - 1);
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i - k - 1] = h(i, k) / scale;
      norm2 += std::norm(v[i - k - 1]);
    }
    double alpha = std::sqrt(norm2);
    if (alpha == 0.0) continue;
    Complex phase =
        std::abs(v[0]) == 0.0 ? Complex{1.0} : v[0] / std::abs(v[0]);
    const Complex beta = -phase * alpha;
    v[0] -= beta;
    double vnorm2 = 0.0;
    for (const auto& vi : v) vnorm2 += std::norm(vi);
    if (vnorm2 == 0.0) continue;
    h(k + 1, k) = beta * scale;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{0.0};
    // Apply (I - 2 v v^H / v^H v) from the left, then from the right.
    for (std::size_t j = k + 1; j < n; ++j) {
      Complex dot{0.0};
      for (std::size_t i = k + 1; i < n; ++i)
        dot += std::conj(v[i - k - 1]) * h(i, j);
      dot *= 2.0 / vnorm2;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * v[i - k - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot{0.0};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j - k - 1];
      dot *= 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j)
        h(i, j) -= dot * std::conj(v[j - k - 1]);
    }
  }
}

inline std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c,
                                          Complex d) {
  const Complex tr = a + d;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr * tr * 0.25 - det);
  return {tr * 0.5 + disc, tr * 0.5 - disc};
}

}  // namespace detail

/// Eigenvalues of a dense complex matrix: Hessenberg reduction followed by
/// a shifted QR iteration with deflation. Sized for collocation-scale
/// matrices (n up to a few tens).
inline std::vector<Complex> eigenvalues(CMatrix h, int max_iter_per_eig = 80) {
  const std::size_t n = h.rows();
  if (h.cols() != n) throw std::invalid_argument("eigenvalues: not square");
  std::vector<Complex> eigs;
  eigs.reserve(n);
  if (n == 0) return eigs;
  detail::hessenberg_reduce(h);

  const double eps = 1e-15;
  std::size_t hi = n - 1;
  int iter = 0;
  while (true) {
    // Deflate converged subdiagonal entries.
    for (std::size_t i = hi; i > 0; --i) {
      const double off = std::abs(h(i, i - 1));
      if (off <= eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i))))
        h(i, i - 1) = Complex{0.0};
    }
    while (hi > 0 && h(hi, hi - 1) == Complex{0.0}) {
      eigs.push_back(h(hi, hi));
      --hi;
      iter = 0;
    }
    if (hi == 0) {
      eigs.push_back(h(0, 0));
      break;
    }
    // Active block [lo, hi].
    std::size_t lo = hi;
    while (lo > 0 && h(lo, lo - 1) != Complex{0.0}) --lo;
    if (hi - lo == 1) {
      auto [e1, e2] = detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      eigs.push_back(e1);
      eigs.push_back(e2);
      if (lo == 0) break;
      hi = lo - 1;
      iter = 0;
      continue;
    }
    if (++iter > max_iter_per_eig) throw EigenConvergenceError();

    // Wilkinson shift from the trailing 2x2, with an occasional
    // exceptional shift to break symmetry stalls.
    Complex mu;
    if (iter % 12 == 0) {
      mu = h(hi, hi) + Complex{std::abs(h(hi, hi - 1)), 0.0};
    } else {
      auto [e1, e2] =
          detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      mu = (std::abs(e1 - h(hi, hi)) < std::abs(e2 - h(hi, hi))) ? e1 : e2;
    }

    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
    std::vector<detail::GivensRotation> rots(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      auto rot = detail::make_givens(h(i, i), h(i + 1, i));
      rots[i - lo] = rot;
      for (std::size_t j = i; j <= hi; ++j) {
        const Complex a = h(i, j), b = h(i + 1, j);
        h(i, j) = rot.c * a + rot.s * b;
        h(i + 1, j) = -std::conj(rot.s) * a + rot.c * b;
      }
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& rot = rots[i - lo];
      const std::size_t rmax = std::min(hi, i + 2);
      for (std::size_t r = lo; r <= rmax; ++r) {
        const Complex a = h(r, i), b = h(r, i + 1);
        h(r, i) = rot.c * a + std::conj(rot.s) * b;
        h(r, i + 1) = -rot.s * a + rot.c * b;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
  }
  return eigs;
}

/// Largest eigenvalue modulus.
template <class T>
double spectral_radius(const Matrix<T>& a, int max_iter_per_eig = 80) {
  CMatrix c;
  if constexpr (std::is_same_v<T, Complex>) {
    c = a;
  } else {
    c = to_complex(a);
  }
  double best = 0.0;
  for (const auto& e : eigenvalues(std::move(c), max_iter_per_eig))
    best = std::max(best, std::abs(e));
  return best;
}

}  // namespace fwsw
