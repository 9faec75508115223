#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gentropy/dist.hpp"
#include "gentropy/loss.hpp"

namespace gentropy {

/// Minimum expected loss together with a minimizing action. `achieved` is
/// true only for the closed-form and table cases, where attainment of the
/// infimum is certain.
struct EntropyResult {
  double value = 0.0;
  Action optimal_action;
  bool achieved = false;
};

/// Deterministic tie-breaking used by every argmax/argmin in the library:
/// lowest index among the extrema.
std::size_t argmax_tiebreak(std::span<const double> values);
std::size_t argmin_tiebreak(std::span<const double> values);

/// Generalized entropy H_l(P) = inf_a E_P[l(Z, a)].
///
/// Log loss: Shannon entropy (nats), optimal action P itself. Quadratic:
/// variance, action the mean. Zero-one: 1 - max prob, action an argmax.
/// Absolute: minimum mean absolute deviation, action the lower median.
/// Table: brute-force column scan.
EntropyResult generalized_entropy(const DiscreteDist& p, const LossSpec& spec);

/// Gaussian closed forms: differential entropy under log loss, variance
/// under quadratic, sigma*sqrt(2/pi) under absolute.
EntropyResult generalized_entropy(const GaussianScalar& p,
                                  const LossSpec& spec);

/// Bayes decision rule: one action per x with positive marginal mass.
struct BayesRule {
  std::vector<std::optional<Action>> actions;  // indexed by x

  const Action& at(std::size_t xi) const;
};

struct ConditionalEntropyResult {
  double value = 0.0;
  BayesRule rule;
};

/// H_l(P_{Y|X} | P_X) = sum_x P_X(x) H_l(P_{Y|X=x}); zero-mass rows
/// contribute nothing and carry no rule entry.
ConditionalEntropyResult conditional_entropy(const JointDiscrete& j,
                                             const LossSpec& spec);

}  // namespace gentropy
