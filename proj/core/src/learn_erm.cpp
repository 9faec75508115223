#include <algorithm>
#include <cmath>

#include "gentropy/divergence.hpp"
#include "gentropy/learn.hpp"
#include "gentropy/rng.hpp"

namespace gentropy {

double fit_loglog_slope(const std::vector<int>& ns,
                        const std::vector<double>& ys) {
  if (ns.size() != ys.size() || ns.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ErmRun erm(const DiscreteDist& p, const LossSpec& table_spec, int n,
           std::uint64_t seed, std::uint64_t stream, double epsilon) {
  if (n <= 0) {
    throw std::invalid_argument("erm: sample count must be positive");
  }
  if (!table_spec.is_table()) {
    throw std::invalid_argument("erm: loss must be a table over (Z, A)");
  }
  const auto idx = sample_indices(p, static_cast<std::size_t>(n), seed, stream);
  DiscreteDist p_hat(p.outcomes(), empirical_from_indices(idx, p.size()));

  const EntropyResult emp = generalized_entropy(p_hat, table_spec);
  const EntropyResult pop = generalized_entropy(p, table_spec);
  const std::size_t hyp = std::get<std::size_t>(emp.optimal_action);

  ErmRun run;
  run.n = n;
  run.hypothesis = hyp;
  run.empirical_entropy = emp.value;
  run.population_entropy = pop.value;
  run.excess_risk = expected_loss(p, table_spec, Action{hyp}) - pop.value;
  run.tv_to_truth = tv(p_hat, p);
  run.kl_to_truth = kl(p_hat, p);
  run.semidistance_to_truth = *semidistance_al(p_hat, p, table_spec);
  run.epsilon = epsilon;
  run.typical = run.semidistance_to_truth <= epsilon;
  return run;
}

std::vector<ErmSweepPoint> erm_sweep(const DiscreteDist& p,
                                     const LossSpec& table_spec,
                                     const std::vector<int>& n_grid,
                                     int trials, std::uint64_t seed,
                                     const std::vector<double>& epsilons) {
  const auto& table = table_spec.table_data();
  if (table.values.minCoeff() < 0.0 || table.values.maxCoeff() > 1.0) {
    throw std::invalid_argument("erm_sweep: losses must lie in [0, 1]");
  }
  const double alphabet = static_cast<double>(p.size());

  std::vector<ErmSweepPoint> out;
  out.reserve(n_grid.size());
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const int n = n_grid[ni];
    ErmSweepPoint point;
    point.n = n;
    point.epsilons = epsilons;
    point.exceed_freq.assign(epsilons.size(), 0.0);
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(t);
      const ErmRun run = erm(p, table_spec, n, seed, stream);
      point.mean_excess += run.excess_risk;
      point.mean_tv += run.tv_to_truth;
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        if (run.excess_risk > epsilons[e]) point.exceed_freq[e] += 1.0;
      }
    }
    point.mean_excess /= trials;
    point.mean_tv /= trials;
    point.mean_excess_curve = std::sqrt(alphabet / n);
    point.exceed_curve.resize(epsilons.size());
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      point.exceed_freq[e] /= trials;
      point.exceed_curve[e] =
          std::exp(-n * (epsilons[e] * epsilons[e] / 2.0 -
                         alphabet * std::log(n + 1.0) / n));
    }
    out.push_back(std::move(point));
  }
  return out;
}

LipschitzInstance make_lipschitz_instance(int p, int side, int n_actions,
                                          double rho_f, std::uint64_t seed) {
  if (p < 2 || p > 3) {
    throw std::invalid_argument(
        "make_lipschitz_instance: p must be 2 or 3 (desk scale)");
  }
  if (side < 2) {
    throw std::invalid_argument("make_lipschitz_instance: side must be >= 2");
  }
  const int dim = p + 1;
  std::size_t n_points = 1;
  for (int d = 0; d < dim; ++d) n_points *= static_cast<std::size_t>(side);
  if (n_points > kTransportCap) {
    throw std::invalid_argument(
        "make_lipschitz_instance: grid exceeds the exact-LP cap");
  }
  const double rho_z = std::sqrt(2.0) * std::max(rho_f, 1.0);

  // Grid points: x coordinates in [0, 1]^p, y in [-1, 1].
  std::vector<std::string> labels(n_points);
  std::vector<std::vector<double>> points(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    std::vector<double> z(static_cast<std::size_t>(dim));
    std::size_t rem = i;
    for (int d = 0; d < dim; ++d) {
      const auto level = rem % static_cast<std::size_t>(side);
      rem /= static_cast<std::size_t>(side);
      const double u = static_cast<double>(level) / (side - 1);
      z[static_cast<std::size_t>(d)] = d < p ? u : 2.0 * u - 1.0;
    }
    points[i] = z;
    std::string label;
    for (int d = 0; d < dim; ++d) {
      if (d) label += ",";
      label += numeric_label(z[static_cast<std::size_t>(d)]);
    }
    labels[i] = label;
  }

  // Seeded weights bounded away from zero keep the W1 decay clean.
  CounterRng rng(seed, 0xface);
  std::vector<double> weights(n_points);
  double total = 0.0;
  for (auto& w : weights) {
    w = 0.5 + rng.next_double();
    total += w;
  }
  for (auto& w : weights) w /= total;

  // Affine f(x, a) = u_a . x + c_a with ||u_a|| <= rho_f; the loss
  // |y - f(x, a)| is then sqrt(2)(rho_f v 1)-Lipschitz in z.
  Eigen::MatrixXd table(n_points, n_actions);
  for (int a = 0; a < n_actions; ++a) {
    Eigen::VectorXd u(p);
    for (int d = 0; d < p; ++d) u(d) = rng.next_gaussian();
    u *= rho_f * (0.3 + 0.7 * rng.next_double()) / std::max(u.norm(), 1e-12);
    const double c = rng.next_double() - 0.5;
    for (std::size_t i = 0; i < n_points; ++i) {
      double f = c;
      for (int d = 0; d < p; ++d) {
        f += u(d) * points[i][static_cast<std::size_t>(d)];
      }
      const double y = points[i][static_cast<std::size_t>(p)];
      table(static_cast<Eigen::Index>(i), a) = std::abs(y - f);
    }
  }
  std::vector<std::string> action_labels(static_cast<std::size_t>(n_actions));
  for (int a = 0; a < n_actions; ++a) {
    action_labels[static_cast<std::size_t>(a)] = "a" + std::to_string(a);
  }

  Eigen::MatrixXd metric =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_points),
                            static_cast<Eigen::Index>(n_points));
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t k = i + 1; k < n_points; ++k) {
      double d2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double diff = points[i][static_cast<std::size_t>(d)] -
                            points[k][static_cast<std::size_t>(d)];
        d2 += diff * diff;
      }
      metric(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::sqrt(d2);
      metric(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          std::sqrt(d2);
    }
  }

  LipschitzInstance inst{
      p,
      std::move(points),
      DiscreteDist(labels, weights),
      LossSpec::table(LossTable(labels, std::move(action_labels),
                                std::move(table))),
      std::move(metric),
      rho_f,
      rho_z};
  if (!validate_lipschitz(inst.loss, labels, inst.metric, inst.rho_z)) {
    throw std::logic_error(
        "make_lipschitz_instance: constructed loss violates its own "
        "Lipschitz certificate");
  }
  return inst;
}

LipschitzRateResult lipschitz_rate_check(const LipschitzInstance& instance,
                                         const std::vector<int>& n_grid,
                                         int trials, std::uint64_t seed) {
  LipschitzRateResult result;
  result.rho_z = instance.rho_z;
  const DiscreteDist& p = instance.dist;

  std::vector<double> mean_w1s;
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const int n = n_grid[ni];
    LipschitzRatePoint point;
    point.n = n;
    point.max_excess_gap = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(t);
      const ErmRun run = erm(p, instance.loss, n, seed, stream);
      const auto idx =
          sample_indices(p, static_cast<std::size_t>(n), seed, stream);
      DiscreteDist p_hat(p.outcomes(), empirical_from_indices(idx, p.size()));
      const double w1 = wasserstein1_discrete(p_hat, p, instance.metric).cost;
      point.mean_w1 += w1;
      point.mean_excess += run.excess_risk;
      point.max_excess_gap =
          std::max(point.max_excess_gap,
                   run.excess_risk - 2.0 * instance.rho_z * w1);
    }
    point.mean_w1 /= trials;
    point.mean_excess /= trials;
    mean_w1s.push_back(point.mean_w1);
    result.points.push_back(point);
  }
  result.fitted_w1_exponent = fit_loglog_slope(n_grid, mean_w1s);
  return result;
}

}  // namespace gentropy
