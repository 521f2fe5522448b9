#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spw {

using cplx = std::complex<double>;
constexpr double PI = 3.14159265358979323846;
constexpr cplx I{0.0, 1.0};

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double norm() const;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Base class for library failures that the CLI maps to exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input that violates a documented precondition (bad layer ordering, degree
// out of range, too few trials, ...).
struct InvalidInput : Error {
  using Error::Error;
};

// Angular quadrature cannot resolve the oscillation at the requested
// wavenumber/radius; carries the degree that would be adequate.
struct ResolutionError : Error {
  int required_degree;
  ResolutionError(const std::string& msg, int required) : Error(msg), required_degree(required) {}
};

// An iteration failed to contract (Born series outside its regime, ...).
struct ConvergenceError : Error {
  double contraction_estimate;
  ConvergenceError(const std::string& msg, double contraction)
      : Error(msg), contraction_estimate(contraction) {}
};

}  // namespace spw
