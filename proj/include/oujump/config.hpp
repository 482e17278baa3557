#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oujump/model.hpp"
#include "oujump/ruin.hpp"
#include "oujump/simulate.hpp"

namespace oujump {

/// Flat key-value run description: model block, query block, compute block.
/// Parsed from `key = value` lines with `[a, b, c]` array literals; unknown
/// keys are rejected and mismatched mixture array lengths are parse errors.
struct RunSpec {
  // model block
  double kappa = 0.0;
  double lambda = 0.0;
  double p = 0.0;
  std::vector<double> alphas, mus, betas, nus;

  // query block
  double x = 1.0;
  double level = 0.0;
  double zeta = 0.0;
  std::vector<double> zeta_grid;

  // compute block
  std::string command;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
  std::int64_t paths = 100000;
  double horizon = 1e5;
  double upper_barrier = 0.0;
  double z_re = 2.0;
  double z_im = 0.0;
  int grid = 25;
  std::string sweep_var;
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  int sweep_points = 0;
  std::string format = "document";
  std::string out;
};

/// Parses the flat text form.  When the text contains a `[config]` section
/// (as emitted in result documents), only that section is read, so a result
/// document itself is a valid input.  Throws BadConfig on unknown keys,
/// malformed values, or mismatched array lengths.
RunSpec parse_runspec(const std::string& text);

/// Re-emittable config echo; parse_runspec(emit_runspec(rs)) reproduces rs.
std::string emit_runspec(const RunSpec& rs);

/// Array flag helper: accepts "[1, 2]", "1,2", or a bare "1".
std::vector<double> parse_number_list(const std::string& text);

/// Validated model from the model block.
OUModel make_model(const RunSpec& rs);

Query make_query(const RunSpec& rs);
QuadratureConfig make_quadrature(const RunSpec& rs);
PathConfig make_paths(const RunSpec& rs);

}  // namespace oujump
