#include "gentropy/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

double objective(const CgfEnvelope& env, double gamma, double lambda) {
  const double p = env.phi(lambda);
  if (std::isnan(p)) return -kInf;
  return lambda * gamma - p;
}

// Log-spaced lambdas on (0, hi]; the suprema of chi-square-type envelopes
// sit near the domain pole, which linear grids miss.
std::vector<double> lambda_grid(const CgfEnvelope& env, double hi) {
  const int n = std::max(env.grid_points, 8);
  const double lo = hi * 1e-12;
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  }
  grid.back() = hi;
  return grid;
}

double golden_refine(const CgfEnvelope& env, double gamma, double lo,
                     double hi) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = objective(env, gamma, x1);
  double f2 = objective(env, gamma, x2);
  while (b - a > 1e-10 * (1.0 + std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = objective(env, gamma, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = objective(env, gamma, x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

CgfEnvelope CgfEnvelope::subgaussian(double sigma2) {
  if (!(sigma2 >= 0.0)) {
    throw std::invalid_argument("subgaussian envelope: sigma2 must be >= 0");
  }
  CgfEnvelope env;
  env.phi = [sigma2](double l) { return 0.5 * sigma2 * l * l; };
  env.b = kInf;
  return env;
}

CgfEnvelope CgfEnvelope::chi_square(double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("chi-square envelope: sigma2 must be > 0");
  }
  CgfEnvelope env;
  env.phi = [sigma2](double l) {
    const double denom = 1.0 - 2.0 * sigma2 * l;
    if (denom <= 0.0) return kInf;
    return sigma2 * sigma2 * l * l / denom;
  };
  env.b = 1.0 / (2.0 * sigma2);
  return env;
}

CgfEnvelope CgfEnvelope::from_table(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) {
    throw std::invalid_argument("table envelope: need at least two knots");
  }
  std::sort(knots.begin(), knots.end());
  if (knots.front().first != 0.0) {
    throw std::invalid_argument(
        "table envelope: the knots must start at lambda = 0");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].second)) {
      throw std::invalid_argument("table envelope: phi values must be finite");
    }
    if (i > 0 && knots[i].first <= knots[i - 1].first) {
      throw std::invalid_argument("table envelope: duplicate lambda knot");
    }
  }
  CgfEnvelope env;
  const double last = knots.back().first;
  env.phi = [knots = std::move(knots)](double l) {
    if (l < knots.front().first || l > knots.back().first) return kInf;
    const auto hi = std::lower_bound(
        knots.begin(), knots.end(), l,
        [](const auto& knot, double v) { return knot.first < v; });
    if (hi == knots.begin()) return knots.front().second;
    const auto lo = hi - 1;
    const double t = (l - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  };
  // b sits just past the last knot so the grid still samples it.
  env.b = last * (1.0 + 1e-9);
  return env;
}

CgfEnvelope CgfEnvelope::from_preset(const std::string& preset) {
  const auto colon = preset.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("envelope preset must be name:parameter");
  }
  const std::string name = preset.substr(0, colon);
  const double value = std::stod(preset.substr(colon + 1));
  if (name == "subgaussian") return subgaussian(value);
  if (name == "chi-square" || name == "chi_square") return chi_square(value);
  throw std::invalid_argument("unknown envelope preset '" + name + "'");
}

double legendre_dual(const CgfEnvelope& env, double gamma) {
  // The lambda = 0 endpoint gives -phi(0), i.e. 0 for a centered envelope.
  double best = objective(env, gamma, 0.0);
  double hi = std::isfinite(env.b) ? env.b * (1.0 - 1e-9) : 1e6;

  for (int expansion = 0;; ++expansion) {
    const auto grid = lambda_grid(env, hi);
    std::size_t arg = 0;
    double grid_best = -kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double f = objective(env, gamma, grid[i]);
      if (f > grid_best) {
        grid_best = f;
        arg = i;
      }
    }
    if (std::isinf(grid_best) && grid_best > 0.0) return kInf;
    const double lo_bracket = arg == 0 ? 0.0 : grid[arg - 1];
    const double hi_bracket = arg + 1 < grid.size() ? grid[arg + 1] : hi;
    best = std::max(best, golden_refine(env, gamma, lo_bracket, hi_bracket));

    // Interior maximum, or a finite domain: done. On an unbounded domain
    // with the scan still rising at the edge, widen the grid; concavity of
    // the objective means unabated growth at 1e18 is divergence.
    const bool at_edge = arg + 1 >= grid.size();
    if (!at_edge || std::isfinite(env.b)) return best;
    if (hi >= 1e18) return kInf;
    hi = std::min(hi * 1e4, 1e18);
  }
}

double generalized_inverse(const CgfEnvelope& env, double x) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("generalized_inverse: x must be >= 0");
  }
  if (std::isinf(x)) return kInf;

  const auto dual = [&](double gamma) { return legendre_dual(env, gamma); };

  // The dual is nondecreasing; bracket the sup of {gamma : dual <= x}.
  double lo = 0.0;
  if (dual(lo) > x) {
    double step = 1.0;
    while (dual(lo - step) > x) {
      step *= 2.0;
      if (step > 1e18) return -kInf;
    }
    lo -= step;
  }
  double hi = std::max(1.0, 2.0 * std::abs(lo));
  while (dual(hi) <= x) {
    hi *= 2.0;
    if (hi >= 1e18) return kInf;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (dual(mid) <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double kl_bound_from_cgf(const CgfEnvelope& env, double kl_value) {
  if (std::isnan(kl_value) || kl_value < 0.0) {
    throw std::invalid_argument("kl_bound_from_cgf: KL must be >= 0");
  }
  return generalized_inverse(env, kl_value);
}

}  // namespace gentropy
