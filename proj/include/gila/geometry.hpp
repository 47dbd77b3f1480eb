#pragma once

#include <cmath>

namespace gila {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
  friend Vec2 operator*(Vec2 a, double s) noexcept { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {a.x * s, a.y * s}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  double norm() const noexcept { return std::sqrt(x * x + y * y); }
  double norm2() const noexcept { return x * x + y * y; }
  bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) noexcept { return (a - b).norm(); }

struct BoundingBox {
  Vec2 min{};
  Vec2 max{};
  bool empty = true;

  void add(const Vec2& p) noexcept {
    if (empty) {
      min = max = p;
      empty = false;
      return;
    }
    min.x = std::fmin(min.x, p.x);
    min.y = std::fmin(min.y, p.y);
    max.x = std::fmax(max.x, p.x);
    max.y = std::fmax(max.y, p.y);
  }
  double width() const noexcept { return empty ? 0.0 : max.x - min.x; }
  double height() const noexcept { return empty ? 0.0 : max.y - min.y; }
  double area() const noexcept { return width() * height(); }
};

}  // namespace gila
