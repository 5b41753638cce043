#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sqcrys {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// counterclockwise quarter turn
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline const double kSqrt2 = std::sqrt(2.0);

// error kinds raised by the library
struct Error : std::runtime_error { using std::runtime_error::runtime_error; };
struct DomainError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct NotDifferentiableError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };

// Energy value with an absorbing "infeasible" state (hard core overlap).
// Infeasible compares greater than every finite energy and is never used in arithmetic.
class Energy {
 public:
  Energy() = default;
  Energy(double v) : value_(v) {}  // NOLINT implicit on purpose
  static Energy infeasible() { Energy e; e.feasible_ = false; return e; }

  bool feasible() const { return feasible_; }
  double value() const {
    if (!feasible_) throw DomainError("energy is infeasible");
    return value_;
  }
  double value_or_inf() const { return feasible_ ? value_ : std::numeric_limits<double>::infinity(); }

  Energy& operator+=(const Energy& o) {
    if (!o.feasible_) feasible_ = false;
    if (feasible_) value_ += o.value_;
    return *this;
  }
  friend Energy operator+(Energy a, const Energy& b) { a += b; return a; }
  friend bool operator<(const Energy& a, const Energy& b) {
    if (!a.feasible_) return false;
    if (!b.feasible_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Energy& a, const Energy& b) { return b < a; }

 private:
  double value_ = 0.0;
  bool feasible_ = true;
};

}  // namespace sqcrys
