#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlab {

/// Project-wide error type. Construction and check routines throw this on
/// precondition violations; the CLI turns it into a structured error report.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A field sampled on the nodes of a Grid. Length must equal the grid size.
using ScalarField = std::vector<double>;

/// Uniform 1D grid on [a, b].
struct Grid {
  double a = 0.0;
  double b = 1.0;
  std::size_t size = 0;
  bool periodic = false;

  double spacing() const {
    return periodic ? (b - a) / static_cast<double>(size)
                    : (b - a) / static_cast<double>(size - 1);
  }

  double node(std::size_t j) const { return a + spacing() * static_cast<double>(j); }

  std::vector<double> nodes() const {
    std::vector<double> x(size);
    for (std::size_t j = 0; j < size; ++j) x[j] = node(j);
    return x;
  }

  void validate() const {
    if (size < 16) throw Error("grid size must be >= 16, got " + std::to_string(size));
    if (!(b > a)) throw Error("grid requires b > a");
    if (!(spacing() > 0.0)) throw Error("grid spacing must be positive");
  }
};

/// Closed index range [lo, hi] of the nodes where a density is positive.
/// empty() means the field vanishes identically.
struct Support {
  std::ptrdiff_t lo = 0;
  std::ptrdiff_t hi = -1;
  bool empty() const { return hi < lo; }
};

inline Support find_support(const ScalarField& f, double floor = 0.0) {
  Support s;
  std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  std::ptrdiff_t lo = 0;
  while (lo < n && !(f[static_cast<std::size_t>(lo)] > floor)) ++lo;
  std::ptrdiff_t hi = n - 1;
  while (hi >= 0 && !(f[static_cast<std::size_t>(hi)] > floor)) --hi;
  s.lo = lo;
  s.hi = hi;
  return s;
}

inline void require_finite(const ScalarField& f, const std::string& what) {
  for (double v : f)
    if (!std::isfinite(v)) throw Error("non-finite value in " + what);
}

}  // namespace wlab
