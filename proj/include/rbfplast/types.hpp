#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace rbfplast {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline double squared_distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Voigt-style 3-vectors. Stresses are ordered (xx, yy, xy); strains are
// ordered (xx, yy, 2xy), i.e. engineering shear.
using Voigt = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Voigt operator+(const Voigt& a, const Voigt& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Voigt operator-(const Voigt& a, const Voigt& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Voigt operator*(double s, const Voigt& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Voigt operator*(const Mat3& m, const Voigt& v) {
  Voigt r{};
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

}  // namespace rbfplast
