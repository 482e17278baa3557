#pragma once

#include <stdexcept>
#include <string>

namespace oujump {

/// Failure categories surfaced by the library. Each maps to a CLI exit code:
/// configuration/validation problems exit 2, numerical failures exit 3, and
/// scenarios the method does not cover exit 4.
enum class ErrorKind {
  // validation / configuration
  NonDensity,     ///< jump mixture integrates to != 1 or dips below zero
  BadOrdering,    ///< mixture rates not strictly increasing (or nonpositive)
  ZeroExponent,   ///< a kernel exponent is exactly zero (degenerate point)
  ZeroDrift,      ///< kappa == 0 (no mean reversion / expansion)
  BadIndex,       ///< contour or mixture index out of range
  BadScenario,    ///< operation called with an incompatible drift/level sign
  BadConfig,      ///< malformed configuration input
  // numerical
  AtBranchPoint,         ///< kernel evaluated exactly on a singular point
  NoConvergence,         ///< quadrature error estimate not met
  DivergentTail,         ///< integrand grows along an infinite ray
  SingularSystem,        ///< coefficient matrix is rank deficient
  IllConditioned,        ///< condition number above the refusal threshold
  NearKink,              ///< derivative stencil too close to a junction
  DegenerateDenominator, ///< eigenfunction boundary values too close
  // scenario coverage
  UnsupportedScenario,   ///< combination not covered by the method
};

/// Exception carrying a structured ErrorKind plus a human-readable message
/// that names the offending quantity (contour, weight, system row, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  static const char* kind_name(ErrorKind k) noexcept {
    switch (k) {
      case ErrorKind::NonDensity: return "NonDensity";
      case ErrorKind::BadOrdering: return "BadOrdering";
      case ErrorKind::ZeroExponent: return "ZeroExponent";
      case ErrorKind::ZeroDrift: return "ZeroDrift";
      case ErrorKind::BadIndex: return "BadIndex";
      case ErrorKind::BadScenario: return "BadScenario";
      case ErrorKind::BadConfig: return "BadConfig";
      case ErrorKind::AtBranchPoint: return "AtBranchPoint";
      case ErrorKind::NoConvergence: return "NoConvergence";
      case ErrorKind::DivergentTail: return "DivergentTail";
      case ErrorKind::SingularSystem: return "SingularSystem";
      case ErrorKind::IllConditioned: return "IllConditioned";
      case ErrorKind::NearKink: return "NearKink";
      case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
      case ErrorKind::UnsupportedScenario: return "UnsupportedScenario";
    }
    return "Error";
  }

  /// Exit-code family for the CLI: 2 config, 3 numerical, 4 unsupported.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::NonDensity:
      case ErrorKind::BadOrdering:
      case ErrorKind::ZeroExponent:
      case ErrorKind::ZeroDrift:
      case ErrorKind::BadIndex:
      case ErrorKind::BadScenario:
      case ErrorKind::BadConfig:
        return 2;
      case ErrorKind::UnsupportedScenario:
        return 4;
      default:
        return 3;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace oujump
