#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gentropy {

/// An upper envelope phi on the centered log moment generating function of
/// a loss variable, finite on [0, b). Feeds the Legendre-dual KL bounds.
struct CgfEnvelope {
  std::function<double(double)> phi;
  double b = std::numeric_limits<double>::infinity();
  int grid_points = 512;

  /// phi(lambda) = sigma2 lambda^2 / 2 on [0, inf).
  static CgfEnvelope subgaussian(double sigma2);
  /// phi(lambda) = sigma2^2 lambda^2 / (1 - 2 sigma2 lambda) on
  /// [0, 1/(2 sigma2)); the envelope of a scaled chi-square variable.
  static CgfEnvelope chi_square(double sigma2);
  /// Piecewise-linear interpolation of (lambda, phi) knots; +infinity past
  /// the last knot. Chords over a convex curve stay upper envelopes.
  static CgfEnvelope from_table(
      std::vector<std::pair<double, double>> knots);
  /// "subgaussian:<s2>" or "chi-square:<s2>" preset strings.
  static CgfEnvelope from_preset(const std::string& preset);
};

/// Legendre dual phi*(gamma) = sup_{0 <= lambda < b} (lambda gamma -
/// phi(lambda)). Coarse scan over a log-spaced lambda grid followed by
/// golden-section refinement; +infinity when the supremum diverges.
double legendre_dual(const CgfEnvelope& env, double gamma);

/// Generalized inverse sup{gamma : phi*(gamma) <= x} for x >= 0, by
/// bisection with bracket expansion; +infinity when the dual never
/// exceeds x.
double generalized_inverse(const CgfEnvelope& env, double x);

/// The entropy-difference bound value at a given KL divergence: the
/// generalized inverse evaluated at kl_value. Rejects negative inputs;
/// +infinity maps to +infinity.
double kl_bound_from_cgf(const CgfEnvelope& env, double kl_value);

}  // namespace gentropy
