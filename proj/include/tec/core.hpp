#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tec {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometryError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class IncompatibleDataError : public Error {
public:
  using Error::Error;
};

class AssemblyError : public Error {
public:
  using Error::Error;
};

class DivergenceError : public Error {
public:
  using Error::Error;
};

class IncompleteModelError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Spatial vector for 1-D/2-D fields; the unused component stays zero in 1-D,
// so full 2-component arithmetic is always valid.
using Vec2 = std::array<double, 2>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

}  // namespace tec
