#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mbdeform {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](std::size_t a) { return a == 0 ? x : (a == 1 ? y : z); }
  constexpr double operator[](std::size_t a) const { return a == 0 ? x : (a == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Integer triple used for node and cell indices.
struct Index3 {
  int i = 0;
  int j = 0;
  int k = 0;

  constexpr int& operator[](std::size_t a) { return a == 0 ? i : (a == 1 ? j : k); }
  constexpr int operator[](std::size_t a) const { return a == 0 ? i : (a == 1 ? j : k); }
  friend constexpr bool operator==(const Index3&, const Index3&) = default;
};

}  // namespace mbdeform
