#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>

namespace qtl {

using cplx = std::complex<double>;

/// Quaternion w + x i + y j + z k with i^2 = j^2 = k^2 = ijk = -1.
struct Quat {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quat() = default;
  constexpr Quat(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quat i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quat j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quat k() { return {0.0, 0.0, 0.0, 1.0}; }

  friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

/// The pair (c1, c2) of the unique decomposition a = c1 + j c2, with
/// c1 = w + x i and c2 = y - z i.
struct ComplexPair {
  cplx c1;
  cplx c2;

  friend bool operator==(const ComplexPair&, const ComplexPair&) = default;
};

constexpr Quat operator+(const Quat& a, const Quat& b) {
  return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr Quat operator-(const Quat& a, const Quat& b) {
  return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr Quat operator-(const Quat& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quat operator*(double s, const Quat& a) {
  return {s * a.w, s * a.x, s * a.y, s * a.z};
}
constexpr Quat operator*(const Quat& a, double s) { return s * a; }

/// Hamilton product.
Quat operator*(const Quat& a, const Quat& b);

inline Quat qmul(const Quat& a, const Quat& b) { return a * b; }

constexpr Quat conj(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }

inline double abs(const Quat& a) {
  return std::sqrt(a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z);
}

/// Embeds a complex number re + im i.
constexpr Quat from_complex(cplx c) { return {c.real(), c.imag(), 0.0, 0.0}; }

ComplexPair split(const Quat& a);
Quat merge(const ComplexPair& p);

std::ostream& operator<<(std::ostream& os, const Quat& a);

}  // namespace qtl
