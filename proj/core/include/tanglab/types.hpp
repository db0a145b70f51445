#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanglab {

using cplx = std::complex<double>;

// Points in R^1 or R^2; 1D values live in component 0 and keep component 1 at zero.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm(const Vec& a);

// Bad parameters, resolution-rule violations.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs outside an operation's declared domain.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Calls that mix incompatible argument kinds.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite or malformed data.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tanglab
