#include "gentropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gentropy {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::size_t argmax_tiebreak(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("argmax_tiebreak: empty list");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t argmin_tiebreak(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("argmin_tiebreak: empty list");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

EntropyResult generalized_entropy(const DiscreteDist& p,
                                  const LossSpec& spec) {
  switch (spec.kind()) {
    case LossKind::log: {
      double h = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double w = p.prob(i);
        if (w > 0.0) h -= w * std::log(w);
      }
      return {h, Action{p}, true};
    }
    case LossKind::quadratic: {
      return {p.variance(), Action{p.mean()}, true};
    }
    case LossKind::zero_one: {
      const std::size_t best = argmax_tiebreak(p.probs());
      return {1.0 - p.prob(best), Action{best}, true};
    }
    case LossKind::absolute: {
      // Lower median: smallest outcome value whose CDF reaches 1/2.
      const auto z = p.numeric_outcomes();
      std::vector<std::size_t> order(z.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
      double cdf = 0.0;
      double median = z[order.back()];
      for (std::size_t k : order) {
        cdf += p.prob(k);
        if (cdf >= 0.5) {
          median = z[k];
          break;
        }
      }
      double mad = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        mad += p.prob(i) * std::abs(z[i] - median);
      }
      return {mad, Action{median}, true};
    }
    case LossKind::table: {
      const auto& t = spec.table_data();
      if (t.outcome_labels != p.outcomes()) {
        throw std::invalid_argument(
            "generalized_entropy: table outcomes do not match the "
            "distribution support");
      }
      std::vector<double> risks(t.n_actions());
      for (std::size_t a = 0; a < t.n_actions(); ++a) {
        double r = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
          r += p.prob(i) * t.values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(a));
        }
        risks[a] = r;
      }
      const std::size_t best = argmin_tiebreak(risks);
      return {risks[best], Action{best}, true};
    }
  }
  throw std::logic_error("unreachable");
}

EntropyResult generalized_entropy(const GaussianScalar& p,
                                  const LossSpec& spec) {
  switch (spec.kind()) {
    case LossKind::log:
      return {0.5 * std::log(2.0 * kPi * std::exp(1.0) * p.variance),
              Action{p}, true};
    case LossKind::quadratic:
      return {p.variance, Action{p.mean}, true};
    case LossKind::absolute:
      // Median equals the mean; E|Z - mean| = sigma sqrt(2/pi).
      return {std::sqrt(2.0 * p.variance / kPi), Action{p.mean}, true};
    case LossKind::zero_one:
    case LossKind::table:
      throw NotApplicableError(
          "generalized_entropy: " + to_string(spec.kind()) +
          " loss is not defined for a continuous distribution");
  }
  throw std::logic_error("unreachable");
}

const Action& BayesRule::at(std::size_t xi) const {
  const auto& entry = actions.at(xi);
  if (!entry) {
    throw std::domain_error("BayesRule: undefined at zero-mass x index " +
                            std::to_string(xi));
  }
  return *entry;
}

ConditionalEntropyResult conditional_entropy(const JointDiscrete& j,
                                             const LossSpec& spec) {
  const DiscreteDist px = j.marginal_x();
  ConditionalEntropyResult out;
  out.rule.actions.resize(j.x_size());
  for (std::size_t xi = 0; xi < j.x_size(); ++xi) {
    if (px.prob(xi) <= 0.0) continue;
    const EntropyResult row =
        generalized_entropy(j.conditional_y_given_x(xi), spec);
    out.value += px.prob(xi) * row.value;
    out.rule.actions[xi] = row.optimal_action;
  }
  return out;
}

}  // namespace gentropy
