#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace kosmann {

/// Small dense complex matrices for pointwise numerics.
template <std::size_t N>
using CMatrix = std::array<std::array<std::complex<double>, N>, N>;

template <std::size_t N>
CMatrix<N> cidentity() {
  CMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
  return m;
}

template <std::size_t N>
CMatrix<N> operator*(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

template <std::size_t N>
CMatrix<N> operator+(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> c = a;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] += b[i][j];
  return c;
}

template <std::size_t N>
CMatrix<N> operator-(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> c = a;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] -= b[i][j];
  return c;
}

template <std::size_t N>
CMatrix<N> operator*(std::complex<double> s, const CMatrix<N>& a) {
  CMatrix<N> c = a;
  for (auto& row : c)
    for (auto& v : row) v *= s;
  return c;
}

template <std::size_t N>
CMatrix<N> adjoint(const CMatrix<N>& a) {
  CMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

template <std::size_t N>
CMatrix<N> transpose(const CMatrix<N>& a) {
  CMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] = a[j][i];
  return c;
}

template <std::size_t N>
double max_abs(const CMatrix<N>& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (const auto& v : row) m = std::max(m, std::abs(v));
  return m;
}

/// Determinant by Gaussian elimination with partial pivoting.
template <std::size_t N>
std::complex<double> determinant(CMatrix<N> a) {
  std::complex<double> det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == std::complex<double>(0.0)) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const auto f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

/// exp(a) by scaling and squaring with a fixed 12-term Taylor series.
template <std::size_t N>
CMatrix<N> expm(const CMatrix<N>& a) {
  const double norm = max_abs(a) * static_cast<double>(N);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix<N> scaled = std::complex<double>(std::ldexp(1.0, -squarings)) * a;
  CMatrix<N> result = cidentity<N>();
  CMatrix<N> term = cidentity<N>();
  for (int k = 1; k <= 12; ++k) {
    term = std::complex<double>(1.0 / k) * (term * scaled);
    result = result + term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace kosmann
