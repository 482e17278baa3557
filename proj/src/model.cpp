#include "oujump/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oujump {
namespace {

/// One-sided mixture density with the sign convention of the downward side:
/// h(t) = sum_k c_k * rate_k * exp(-rate_k * t) for t > 0 (t = |u|).
/// Both sides reduce to this after mirroring.
double side_density(const std::vector<double>& coeffs,
                    const std::vector<double>& rates, double t) {
  double v = 0.0;
  for (size_t k = 0; k < coeffs.size(); ++k)
    v += coeffs[k] * rates[k] * std::exp(-rates[k] * t);
  return v;
}

double side_density_derivative(const std::vector<double>& coeffs,
                               const std::vector<double>& rates, double t) {
  double v = 0.0;
  for (size_t k = 0; k < coeffs.size(); ++k)
    v -= coeffs[k] * rates[k] * rates[k] * std::exp(-rates[k] * t);
  return v;
}

/// Verify h(t) >= 0 on (0, inf).  The smallest rate dominates as t -> inf,
/// and its coefficient is required positive, so only a bounded window needs
/// scanning: beyond t* where the first term exceeds the sum of all other
/// term magnitudes, positivity is automatic.  On [0, t*] use a dense grid
/// plus bisection refinement of the critical points of h (sign changes of
/// h') and check the refined local minima.
void check_side_nonnegative(const std::vector<double>& coeffs,
                            const std::vector<double>& rates,
                            const char* side_name) {
  const size_t n = coeffs.size();
  if (n == 1) return;  // single exponential with positive coefficient

  // Window where cross terms can still compete with the dominant one.
  double scale = 0.0;
  for (size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(coeffs[k]) * rates[k]);
  double t_hi = 0.0;
  for (size_t k = 1; k < n; ++k) {
    // coeffs[0]*rates[0]*e^{-rates[0] t} >= |coeffs[k]|*rates[k]*e^{-rates[k] t}
    // holds for t >= log(|c_k| r_k / (c_0 r_0)) / (r_k - r_0); collect the max.
    const double num = std::abs(coeffs[k]) * rates[k] * (n - 1);
    const double den = coeffs[0] * rates[0];
    const double t_k = std::log(std::max(num / den, 1.0)) / (rates[k] - rates[0]);
    t_hi = std::max(t_hi, t_k);
  }
  t_hi = std::max(t_hi, 1.0 / rates[0]);

  const int grid_n = 10000;
  const double tol = -1e-12 * scale;
  double prev_t = 0.0;
  double prev_d = side_density_derivative(coeffs, rates, 0.0);
  for (int i = 0; i <= grid_n; ++i) {
    const double t = t_hi * static_cast<double>(i) / grid_n;
    const double h = side_density(coeffs, rates, t);
    if (h < tol) {
      std::ostringstream os;
      os << side_name << " density negative (" << h << ") at |u| = " << t;
      throw Error(ErrorKind::NonDensity, os.str());
    }
    // Refine interior critical points: bracket sign changes of h'.
    const double d = side_density_derivative(coeffs, rates, t);
    if (i > 0 && prev_d < 0.0 && d > 0.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (side_density_derivative(coeffs, rates, mid) < 0.0 ? lo : hi) = mid;
      }
      const double hmin = side_density(coeffs, rates, 0.5 * (lo + hi));
      if (hmin < tol) {
        std::ostringstream os;
        os << side_name << " density negative (" << hmin
           << ") at interior minimum |u| = " << 0.5 * (lo + hi);
        throw Error(ErrorKind::NonDensity, os.str());
      }
    }
    prev_t = t;
    prev_d = d;
  }
}

void check_rates_ordered(const std::vector<double>& rates, const char* name) {
  for (size_t k = 0; k < rates.size(); ++k) {
    if (!(rates[k] > 0.0) || !std::isfinite(rates[k]))
      throw Error(ErrorKind::BadOrdering,
                  std::string(name) + " rates must be positive and finite");
    if (k > 0 && !(rates[k] > rates[k - 1]))
      throw Error(ErrorKind::BadOrdering,
                  std::string(name) + " rates must be strictly increasing");
  }
}

}  // namespace

OUModel validate_model(double kappa, double lambda, double p,
                       std::vector<double> alphas, std::vector<double> mus,
                       std::vector<double> betas, std::vector<double> nus) {
  if (!(kappa != 0.0) || !std::isfinite(kappa))
    throw Error(ErrorKind::ZeroDrift, "kappa must be nonzero and finite");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::NonDensity, "lambda must be positive");
  if (!(p > 0.0) || !(p <= 1.0))
    throw Error(ErrorKind::NonDensity, "p must lie in (0, 1]");

  if (alphas.size() != mus.size())
    throw Error(ErrorKind::NonDensity, "alphas and mus must have equal length");
  if (betas.size() != nus.size())
    throw Error(ErrorKind::NonDensity, "betas and nus must have equal length");
  if (alphas.empty())
    throw Error(ErrorKind::NonDensity, "at least one downward component required");

  const bool has_up = p < 1.0;
  if (has_up && betas.empty())
    throw Error(ErrorKind::NonDensity,
                "p < 1 requires an upward mixture (betas/nus)");
  if (!has_up && !betas.empty())
    throw Error(ErrorKind::ZeroExponent,
                "p = 1 with upward components present: their kernel exponents "
                "-q*lambda*beta_d/kappa would vanish; drop them instead");

  check_rates_ordered(mus, "downward (mu)");
  check_rates_ordered(nus, "upward (nu)");

  auto check_coeffs = [](const std::vector<double>& c, const char* name) {
    double sum = 0.0;
    for (size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0.0)
        throw Error(ErrorKind::ZeroExponent,
                    std::string(name) + " coefficient exactly zero at index " +
                        std::to_string(k + 1) +
                        " (kernel exponent would vanish)");
      sum += c[k];
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(ErrorKind::NonDensity,
                  std::string(name) + " coefficients must sum to 1 (got " +
                      std::to_string(sum) + ")");
    if (!(c[0] > 0.0))
      throw Error(ErrorKind::NonDensity,
                  std::string(name) +
                      "_1 must be positive (dominant tail coefficient)");
  };
  check_coeffs(alphas, "alpha");
  if (has_up) check_coeffs(betas, "beta");

  check_side_nonnegative(alphas, mus, "downward");
  if (has_up) check_side_nonnegative(betas, nus, "upward");

  OUModel m;
  m.kappa = kappa;
  m.lambda = lambda;
  m.jumps.p = p;
  m.jumps.alphas = std::move(alphas);
  m.jumps.mus = std::move(mus);
  m.jumps.betas = std::move(betas);
  m.jumps.nus = std::move(nus);
  return m;
}

double jump_density(const OUModel& model, double u) {
  const JumpMixture& j = model.jumps;
  if (u < 0.0) return j.p * side_density(j.alphas, j.mus, -u);
  if (u > 0.0) return j.q() * side_density(j.betas, j.nus, u);
  // u == 0: densities are defined on the punctured line; return the
  // downward limit (only used by plotting/tests, never by quadrature).
  return j.p * side_density(j.alphas, j.mus, 0.0);
}

double jump_cdf(const OUModel& model, double u) {
  const JumpMixture& j = model.jumps;
  if (u < 0.0) {
    double v = 0.0;
    for (size_t k = 0; k < j.alphas.size(); ++k)
      v += j.alphas[k] * std::exp(j.mus[k] * u);
    return j.p * v;
  }
  double tail = 0.0;
  for (size_t d = 0; d < j.betas.size(); ++d)
    tail += j.betas[d] * std::exp(-j.nus[d] * u);
  return j.p + j.q() * (1.0 - tail);
}

std::vector<PointClass> classify_points(const OUModel& model) {
  std::vector<PointClass> points;
  points.reserve(static_cast<size_t>(model.r() + model.s() + 1));
  const double scale = model.lambda / model.kappa;
  // -nu_s, ..., -nu_1 in increasing order of location
  for (int d = model.s(); d >= 1; --d) {
    PointClass pc;
    pc.location = -model.nu(d);
    pc.exponent = -model.jumps.q() * scale * model.beta(d);
    points.push_back(pc);
  }
  {
    PointClass pc;
    pc.location = 0.0;
    pc.exponent = -1.0;
    points.push_back(pc);
  }
  for (int k = 1; k <= model.r(); ++k) {
    PointClass pc;
    pc.location = model.mu(k);
    pc.exponent = -model.jumps.p * scale * model.alpha(k);
    points.push_back(pc);
  }
  for (PointClass& pc : points) {
    if (pc.exponent == 0.0)
      throw Error(ErrorKind::ZeroExponent,
                  "kernel exponent vanishes at " + std::to_string(pc.location));
    pc.kind = pc.exponent > 0.0 ? PointKind::Zero : PointKind::Singularity;
  }
  return points;
}

double jump_mean(const OUModel& model) {
  const JumpMixture& j = model.jumps;
  double down = 0.0, up = 0.0;
  for (size_t k = 0; k < j.alphas.size(); ++k) down += j.alphas[k] / j.mus[k];
  for (size_t d = 0; d < j.betas.size(); ++d) up += j.betas[d] / j.nus[d];
  return -j.p * down + j.q() * up;
}

}  // namespace oujump
