#pragma once

// Second-order forward-mode automatic differentiation.
//
// A Jet<T, N> carries the value of a function of N real variables together
// with its gradient and Hessian. T is either double or std::complex<double>;
// complex jets represent complex-valued functions of real variables, so the
// derivatives are ordinary partial derivatives and conj() acts entrywise.
//
// `order` records how many derivative levels are trustworthy. Jets produced
// by differentiating another jet (see partial()) lose one level, and every
// binary operation keeps the minimum of its operands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace vekua {

using Complex = std::complex<double>;

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <class T, int N>
struct Jet {
  static_assert(N >= 1);
  using value_type = T;
  static constexpr int dim = N;

  T v{};
  std::array<T, N> d{};
  std::array<std::array<T, N>, N> dd{};
  int order = 2;

  static Jet constant(T c) {
    Jet j;
    j.v = c;
    return j;
  }

  static Jet variable(double x, int slot) {
    Jet j;
    j.v = T(x);
    j.d[slot] = T(1);
    return j;
  }

  T laplacian() const {
    T s{};
    for (int k = 0; k < N; ++k) s += dd[k][k];
    return s;
  }
};

template <class T, int N>
Jet<Complex, N> to_complex(const Jet<T, N>& a) {
  if constexpr (std::is_same_v<T, Complex>) {
    return a;
  } else {
    Jet<Complex, N> r;
    r.v = a.v;
    r.order = a.order;
    for (int k = 0; k < N; ++k) {
      r.d[k] = a.d[k];
      for (int l = 0; l < N; ++l) r.dd[k][l] = a.dd[k][l];
    }
    return r;
  }
}

/// Applies a scalar function with value f0, first derivative f1 and second
/// derivative f2 (all at a.v) through the chain rule.
template <class T, int N>
Jet<T, N> chain(const Jet<T, N>& a, T f0, T f1, T f2) {
  Jet<T, N> r;
  r.order = a.order;
  r.v = f0;
  for (int k = 0; k < N; ++k) r.d[k] = f1 * a.d[k];
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) r.dd[k][l] = f1 * a.dd[k][l] + f2 * a.d[k] * a.d[l];
  return r;
}

template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a) {
  Jet<T, N> r = a;
  r.v = -r.v;
  for (int k = 0; k < N; ++k) {
    r.d[k] = -r.d[k];
    for (int l = 0; l < N; ++l) r.dd[k][l] = -r.dd[k][l];
  }
  return r;
}

template <class T, int N>
Jet<T, N> operator+(const Jet<T, N>& a, const Jet<T, N>& b) {
  Jet<T, N> r;
  r.order = std::min(a.order, b.order);
  r.v = a.v + b.v;
  for (int k = 0; k < N; ++k) {
    r.d[k] = a.d[k] + b.d[k];
    for (int l = 0; l < N; ++l) r.dd[k][l] = a.dd[k][l] + b.dd[k][l];
  }
  return r;
}

template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a, const Jet<T, N>& b) {
  return a + (-b);
}

template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const Jet<T, N>& b) {
  Jet<T, N> r;
  r.order = std::min(a.order, b.order);
  r.v = a.v * b.v;
  for (int k = 0; k < N; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l)
      r.dd[k][l] = a.dd[k][l] * b.v + a.d[k] * b.d[l] + a.d[l] * b.d[k] + a.v * b.dd[k][l];
  return r;
}

template <class T, int N>
Jet<T, N> reciprocal(const Jet<T, N>& a) {
  const T inv = T(1) / a.v;
  return chain(a, inv, -inv * inv, T(2) * inv * inv * inv);
}

template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b) {
  return a * reciprocal(b);
}

// Scalar mixing. S is any arithmetic or complex type convertible to T.
template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, T s) {
  Jet<T, N> r = a;
  r.v *= s;
  for (int k = 0; k < N; ++k) {
    r.d[k] *= s;
    for (int l = 0; l < N; ++l) r.dd[k][l] *= s;
  }
  return r;
}
template <class T, int N>
Jet<T, N> operator*(T s, const Jet<T, N>& a) {
  return a * s;
}
template <class T, int N>
Jet<T, N> operator+(const Jet<T, N>& a, T s) {
  Jet<T, N> r = a;
  r.v += s;
  return r;
}
template <class T, int N>
Jet<T, N> operator+(T s, const Jet<T, N>& a) {
  return a + s;
}
template <class T, int N>
Jet<T, N> operator-(const Jet<T, N>& a, T s) {
  return a + (-s);
}
template <class T, int N>
Jet<T, N> operator-(T s, const Jet<T, N>& a) {
  return (-a) + s;
}
template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, T s) {
  return a * (T(1) / s);
}
template <class T, int N>
Jet<T, N> operator/(T s, const Jet<T, N>& a) {
  return reciprocal(a) * s;
}

template <class T, int N>
Jet<T, N> exp(const Jet<T, N>& a) {
  using std::exp;
  const T e = exp(a.v);
  return chain(a, e, e, e);
}

template <class T, int N>
Jet<T, N> log(const Jet<T, N>& a) {
  using std::log;
  const T inv = T(1) / a.v;
  return chain(a, log(a.v), inv, -inv * inv);
}

template <class T, int N>
Jet<T, N> sqrt(const Jet<T, N>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return chain(a, s, T(0.5) / s, T(-0.25) / (s * a.v));
}

template <class T, int N>
Jet<T, N> sin(const Jet<T, N>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.v);
  return chain(a, s, cos(a.v), -s);
}

template <class T, int N>
Jet<T, N> cos(const Jet<T, N>& a) {
  using std::cos;
  using std::sin;
  const T c = cos(a.v);
  return chain(a, c, -sin(a.v), -c);
}

/// a^p for a constant real exponent p.
template <class T, int N>
Jet<T, N> pow(const Jet<T, N>& a, double p) {
  using std::pow;
  const T f0 = pow(a.v, p);
  const T f1 = T(p) * pow(a.v, p - 1.0);
  const T f2 = T(p * (p - 1.0)) * pow(a.v, p - 2.0);
  return chain(a, f0, f1, f2);
}

/// a^n for an integer exponent, valid for any nonzero base sign.
template <class T, int N>
Jet<T, N> ipow(const Jet<T, N>& a, int n) {
  if (n < 0) return reciprocal(ipow(a, -n));
  Jet<T, N> result = Jet<T, N>::constant(T(1));
  result.order = a.order;
  Jet<T, N> base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

inline double ipow(double a, int n) {
  if (n < 0) return 1.0 / ipow(a, -n);
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= a;
    a *= a;
    n >>= 1;
  }
  return result;
}

template <int N>
Jet<Complex, N> conj(const Jet<Complex, N>& a) {
  Jet<Complex, N> r;
  r.order = a.order;
  r.v = std::conj(a.v);
  for (int k = 0; k < N; ++k) {
    r.d[k] = std::conj(a.d[k]);
    for (int l = 0; l < N; ++l) r.dd[k][l] = std::conj(a.dd[k][l]);
  }
  return r;
}

template <int N>
Jet<double, N> real(const Jet<Complex, N>& a) {
  Jet<double, N> r;
  r.order = a.order;
  r.v = a.v.real();
  for (int k = 0; k < N; ++k) {
    r.d[k] = a.d[k].real();
    for (int l = 0; l < N; ++l) r.dd[k][l] = a.dd[k][l].real();
  }
  return r;
}

template <int N>
Jet<double, N> imag(const Jet<Complex, N>& a) {
  Jet<double, N> r;
  r.order = a.order;
  r.v = a.v.imag();
  for (int k = 0; k < N; ++k) {
    r.d[k] = a.d[k].imag();
    for (int l = 0; l < N; ++l) r.dd[k][l] = a.dd[k][l].imag();
  }
  return r;
}

/// Combines real and imaginary part jets into a complex jet.
template <int N>
Jet<Complex, N> make_complex(const Jet<double, N>& re, const Jet<double, N>& im) {
  Jet<Complex, N> r;
  r.order = std::min(re.order, im.order);
  r.v = {re.v, im.v};
  for (int k = 0; k < N; ++k) {
    r.d[k] = {re.d[k], im.d[k]};
    for (int l = 0; l < N; ++l) r.dd[k][l] = {re.dd[k][l], im.dd[k][l]};
  }
  return r;
}

/// The jet of the partial derivative along `slot`; one derivative level is lost.
template <class T, int N>
Jet<T, N> partial(const Jet<T, N>& a, int slot) {
  Jet<T, N> r;
  r.order = a.order - 1;
  r.v = a.d[slot];
  for (int l = 0; l < N; ++l) r.d[l] = a.dd[slot][l];
  return r;
}

// Value-channel access shared by plain scalars and jets.
inline double value_of(double x) { return x; }
inline Complex value_of(const Complex& x) { return x; }
template <class T, int N>
T value_of(const Jet<T, N>& j) {
  return j.v;
}

}  // namespace vekua
