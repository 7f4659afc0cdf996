#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qst {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class for all library errors. The CLI maps subclasses onto exit
/// codes: input/validation errors -> 2, resource-cap errors -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidLabel : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct InvalidSites : Error { using Error::Error; };
struct InvalidDensityMatrix : Error { using Error::Error; };
struct InvalidDimension : Error { using Error::Error; };
struct InvalidShots : Error { using Error::Error; };
struct TooManySites : Error { using Error::Error; };
struct LocalityCap : Error { using Error::Error; };
struct InvalidChannel : Error { using Error::Error; };
struct InvalidTolerance : Error { using Error::Error; };
struct ZeroInput : Error { using Error::Error; };
struct InvalidMode : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

/// Resource-cap violation (register too large for a dense routine, etc.).
struct TooLarge : Error { using Error::Error; };

// Default desk-scale caps. Routines that need tighter limits take them as
// parameters so callers can loosen or tighten per use.
inline constexpr std::size_t kDefaultAmplitudeCap = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultOracleCap = std::size_t{1} << 12;
inline constexpr int kDefaultRdmSiteCap = 3;
inline constexpr int kDefaultLocalityCap = 3;

}  // namespace qst
