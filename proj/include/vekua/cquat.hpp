#pragma once

// Complex quaternions (biquaternions) q0 + q1 i + q2 j + q3 k with complex
// components. The quaternionic units i, j, k commute with the complex
// imaginary unit of the components.

#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <utility>

#include "vekua/jet.hpp"

namespace vekua {

template <class T>
struct BasicQuat {
  T q0{}, q1{}, q2{}, q3{};

  constexpr BasicQuat() = default;
  constexpr BasicQuat(T a0, T a1, T a2, T a3) : q0(a0), q1(a1), q2(a2), q3(a3) {}
  constexpr explicit BasicQuat(T scalar) : q0(scalar) {}

  static constexpr BasicQuat one() { return {T(1), T(0), T(0), T(0)}; }
  static constexpr BasicQuat i() { return {T(0), T(1), T(0), T(0)}; }
  static constexpr BasicQuat j() { return {T(0), T(0), T(1), T(0)}; }
  static constexpr BasicQuat k() { return {T(0), T(0), T(0), T(1)}; }
  static constexpr BasicQuat vector(T a1, T a2, T a3) { return {T(0), a1, a2, a3}; }

  /// Quaternionic unit e_1, e_2, e_3 = i, j, k for index 0, 1, 2.
  static constexpr BasicQuat unit(int index) {
    BasicQuat u;
    u[index + 1] = T(1);
    return u;
  }

  T& operator[](int n) { return n == 0 ? q0 : n == 1 ? q1 : n == 2 ? q2 : q3; }
  const T& operator[](int n) const { return n == 0 ? q0 : n == 1 ? q1 : n == 2 ? q2 : q3; }

  T scalar() const { return q0; }
  BasicQuat vec() const { return {T(0), q1, q2, q3}; }

  BasicQuat& operator+=(const BasicQuat& o) {
    q0 += o.q0;
    q1 += o.q1;
    q2 += o.q2;
    q3 += o.q3;
    return *this;
  }
  BasicQuat& operator-=(const BasicQuat& o) {
    q0 -= o.q0;
    q1 -= o.q1;
    q2 -= o.q2;
    q3 -= o.q3;
    return *this;
  }
  BasicQuat& operator*=(T s) {
    q0 *= s;
    q1 *= s;
    q2 *= s;
    q3 *= s;
    return *this;
  }

  friend BasicQuat operator+(BasicQuat a, const BasicQuat& b) { return a += b; }
  friend BasicQuat operator-(BasicQuat a, const BasicQuat& b) { return a -= b; }
  friend BasicQuat operator-(const BasicQuat& a) { return {-a.q0, -a.q1, -a.q2, -a.q3}; }
  friend BasicQuat operator*(BasicQuat a, T s) { return a *= s; }
  friend BasicQuat operator*(T s, BasicQuat a) { return a *= s; }
  friend bool operator==(const BasicQuat&, const BasicQuat&) = default;

  /// Hamilton product; non-commutative.
  friend BasicQuat operator*(const BasicQuat& a, const BasicQuat& b) {
    return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
  }

  friend std::ostream& operator<<(std::ostream& os, const BasicQuat& q) {
    return os << "(" << q.q0 << ", " << q.q1 << ", " << q.q2 << ", " << q.q3 << ")";
  }
};

using CQuat = BasicQuat<Complex>;

template <class T>
BasicQuat<T> mul(const BasicQuat<T>& a, const BasicQuat<T>& b) {
  return a * b;
}

/// (Sc q, Vec q).
template <class T>
std::pair<T, BasicQuat<T>> sc_vec(const BasicQuat<T>& q) {
  return {q.scalar(), q.vec()};
}

template <class T>
bool is_pure_vector(const BasicQuat<T>& q, double tol) {
  return std::abs(q.q0) <= tol;
}

/// Bilinear scalar product of the vector parts (no conjugation).
template <class T>
T dot(const BasicQuat<T>& p, const BasicQuat<T>& q) {
  return p.q1 * q.q1 + p.q2 * q.q2 + p.q3 * q.q3;
}

/// Cross product of the vector parts.
template <class T>
BasicQuat<T> cross(const BasicQuat<T>& p, const BasicQuat<T>& q) {
  return BasicQuat<T>::vector(p.q2 * q.q3 - p.q3 * q.q2, p.q3 * q.q1 - p.q1 * q.q3,
                              p.q1 * q.q2 - p.q2 * q.q1);
}

/// Max-abs of the components.
template <class T>
double max_abs(const BasicQuat<T>& q) {
  using std::abs;
  return std::max({abs(q.q0), abs(q.q1), abs(q.q2), abs(q.q3)});
}

/// Right multiplication M^p q = q p.
template <class T>
class RightMul {
 public:
  explicit RightMul(BasicQuat<T> p) : p_(p) {}
  BasicQuat<T> operator()(const BasicQuat<T>& q) const { return q * p_; }
  const BasicQuat<T>& multiplier() const { return p_; }

  /// (M^p o M^r) = M^{r p}.
  friend RightMul compose(const RightMul& outer, const RightMul& inner) {
    return RightMul(inner.p_ * outer.p_);
  }

 private:
  BasicQuat<T> p_;
};

/// Left multiplication ^pM q = p q.
template <class T>
class LeftMul {
 public:
  explicit LeftMul(BasicQuat<T> p) : p_(p) {}
  BasicQuat<T> operator()(const BasicQuat<T>& q) const { return p_ * q; }

 private:
  BasicQuat<T> p_;
};

template <class T>
RightMul<T> right_mul(const BasicQuat<T>& p) {
  return RightMul<T>(p);
}

template <class T>
LeftMul<T> left_mul(const BasicQuat<T>& p) {
  return LeftMul<T>(p);
}

/// <p, q> = -1/2 (^pM + M^p) q for vectors p, q.
template <class T>
T scalar_product_via_multiplication(const BasicQuat<T>& p, const BasicQuat<T>& q) {
  const BasicQuat<T> s = left_mul(p)(q) + right_mul(p)(q);
  return T(-0.5) * s.q0;
}

// Planar splitting p = P1 + P2 j with P1 = p0 + p3 k and P2 = p2 - p1 k.
// A "k-complex" number a + b k is stored as its two coefficients; for real
// components it is identified with the ordinary complex number a + b i.

template <class T>
struct KComplex {
  T a{};  // coefficient of 1
  T b{};  // coefficient of k
  friend bool operator==(const KComplex&, const KComplex&) = default;
};

template <class T>
struct Split2d {
  KComplex<T> P1;
  KComplex<T> P2;
};

template <class T>
Split2d<T> split_2d(const BasicQuat<T>& q) {
  return {{q.q0, q.q3}, {q.q2, -q.q1}};
}

template <class T>
BasicQuat<T> join_2d(const Split2d<T>& s) {
  return {s.P1.a, -s.P2.b, s.P2.a, s.P1.b};
}

inline Complex to_complex(const KComplex<double>& z) { return {z.a, z.b}; }

}  // namespace vekua
