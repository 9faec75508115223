#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace gentropy {

/// Normalization slack accepted by all distribution constructors. Inputs
/// whose mass deviates from 1 by at most this amount are renormalized;
/// anything further off is rejected.
inline constexpr double kMassTolerance = 1e-12;

/// Finite-support probability distribution with labeled, index-addressable
/// outcomes. Zero-probability outcomes are kept in the support; KL and
/// chi-square bookkeeping relies on them.
class DiscreteDist {
 public:
  DiscreteDist(std::vector<std::string> outcomes, std::vector<double> probs);

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_.at(i); }
  const std::string& outcome(std::size_t i) const { return outcomes_.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const;

  /// True when every outcome label parses as a real number.
  bool has_numeric_outcomes() const;
  /// Outcome labels parsed as reals; throws std::invalid_argument otherwise.
  std::vector<double> numeric_outcomes() const;

  double mean() const;      // requires numeric outcomes
  double variance() const;  // requires numeric outcomes

  bool same_support(const DiscreteDist& other) const {
    return outcomes_ == other.outcomes_;
  }

  static DiscreteDist point_mass(std::string outcome);
  static DiscreteDist uniform(std::vector<std::string> outcomes);
  /// Two-point distribution (1-p, p) on {"0","1"}.
  static DiscreteDist bernoulli(double p);

  nlohmann::json to_json() const;
  static DiscreteDist from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> probs_;
};

/// Scalar Gaussian; variance must be strictly positive.
struct GaussianScalar {
  double mean = 0.0;
  double variance = 1.0;

  GaussianScalar(double mean_, double variance_);
};

class JointDiscrete;

/// Marginals and the conditional family P_{Y|X=x}. Rows of the joint with
/// zero marginal mass have no conditional (nullopt).
struct Marginals {
  DiscreteDist x;
  DiscreteDist y;
  std::vector<std::optional<DiscreteDist>> y_given_x;
};

/// Joint distribution over a product of two finite label sets.
class JointDiscrete {
 public:
  JointDiscrete(std::vector<std::string> x_outcomes,
                std::vector<std::string> y_outcomes, Eigen::MatrixXd probs);

  const std::vector<std::string>& x_outcomes() const { return x_outcomes_; }
  const std::vector<std::string>& y_outcomes() const { return y_outcomes_; }
  const Eigen::MatrixXd& probs() const { return probs_; }
  std::size_t x_size() const { return x_outcomes_.size(); }
  std::size_t y_size() const { return y_outcomes_.size(); }

  DiscreteDist marginal_x() const;
  DiscreteDist marginal_y() const;
  /// Conditional row; throws std::domain_error at zero-mass x.
  DiscreteDist conditional_y_given_x(std::size_t xi) const;

  /// Product joint px (x) py.
  static JointDiscrete product(const DiscreteDist& px, const DiscreteDist& py);

  /// Row-major flattening to a DiscreteDist over labels "x|y".
  DiscreteDist flatten() const;
  /// Inverse of flatten() for a distribution on the same product support.
  static JointDiscrete unflatten(const DiscreteDist& flat,
                                 std::vector<std::string> x_outcomes,
                                 std::vector<std::string> y_outcomes);

  nlohmann::json to_json() const;
  static JointDiscrete from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> x_outcomes_;
  std::vector<std::string> y_outcomes_;
  Eigen::MatrixXd probs_;
};

Marginals marginals(const JointDiscrete& j);

/// Empirical distribution of `samples` over an ordered support; zero-count
/// outcomes are kept with probability 0. A sample outside the support is
/// rejected with the offending label in the message.
DiscreteDist empirical(const std::vector<std::string>& samples,
                       const std::vector<std::string>& support);

/// Empirical probabilities from outcome indices (fast path).
std::vector<double> empirical_from_indices(const std::vector<std::size_t>& idx,
                                           std::size_t support_size);

std::vector<std::size_t> sample_indices(const DiscreteDist& dist, std::size_t n,
                                        std::uint64_t seed,
                                        std::uint64_t stream = 0);
std::vector<std::string> sample(const DiscreteDist& dist, std::size_t n,
                                std::uint64_t seed, std::uint64_t stream = 0);
std::vector<double> sample(const GaussianScalar& dist, std::size_t n,
                           std::uint64_t seed, std::uint64_t stream = 0);
std::vector<std::pair<std::size_t, std::size_t>> sample_indices(
    const JointDiscrete& dist, std::size_t n, std::uint64_t seed,
    std::uint64_t stream = 0);

/// Parse a label as a real number; nullopt when it is not numeric.
std::optional<double> parse_numeric_label(std::string_view label);
/// Canonical numeric label (17 significant digits, '.' decimal).
std::string numeric_label(double value);

}  // namespace gentropy
