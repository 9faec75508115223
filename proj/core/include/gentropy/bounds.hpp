#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gentropy/dist.hpp"
#include "gentropy/divergence.hpp"
#include "gentropy/legendre.hpp"
#include "gentropy/loss.hpp"

namespace gentropy {

/// One evaluated entropy-difference bound. `value` is present iff the
/// evaluator verified its preconditions on the inputs; +infinity is a legal
/// (vacuous but sound) value.
struct BoundReport {
  std::string name;
  std::optional<double> value;
  bool applicable = false;
  std::vector<std::string> conditions;
  std::string citation;

  nlohmann::json to_json() const;
  static BoundReport from_json(const nlohmann::json& j);
};

/// Upper bounds on the two signed entropy differences: `upper` bounds
/// H(P) - H(Q), `lower` bounds H(Q) - H(P).
struct BoundPair {
  BoundReport upper;
  BoundReport lower;
};

/// (beta_a - alpha_a) d_TV(P, Q) with tight per-action loss ranges at the
/// optimal actions a_Q (upper) and a_P (lower).
BoundPair tv_bound(const DiscreteDist& p, const DiscreteDist& q,
                   const LossSpec& spec);

/// sqrt(2 sigma^2 D(P||Q)). Constants may be supplied; bounded losses
/// derive (beta - alpha)^2 / 4 from the tight per-action range.
BoundPair kl_subgaussian_bound(const DiscreteDist& p, const DiscreteDist& q,
                               const LossSpec& spec,
                               std::optional<double> sigma2_q = std::nullopt,
                               std::optional<double> sigma2_p = std::nullopt);

/// Generalized-inverse bound phi*^-1(D(P||Q)) for caller-supplied CGF
/// envelopes. For discrete inputs the envelope condition is checked by
/// exact expectation on the lambda grid unless `trusted` is set.
BoundPair kl_general_bound(const DiscreteDist& p, const DiscreteDist& q,
                           const LossSpec& spec, const CgfEnvelope& env_q,
                           const CgfEnvelope& env_p, bool trusted = false);

/// |Var_P - Var_Q| <= 2 sigma^2 (sqrt(D) + D) against a Gaussian Q.
BoundReport gaussian_variance_kl_bound(const GaussianScalar& q,
                                       double kl_value);

/// Log-loss bound with subgaussian constants fitted from the Renyi
/// (cross-)entropy gap on a lambda grid; the fitted sigma^2 is reported.
BoundPair renyi_condition_bound(const DiscreteDist& p, const DiscreteDist& q,
                                double lambda_max = 50.0,
                                int grid_points = 512);

/// sqrt(Var_Q[l(Z, a)] chi2(P||Q)) at a = a_Q (upper) and a = a_P (lower).
BoundPair chi2_bound(const DiscreteDist& p, const DiscreteDist& q,
                     const LossSpec& spec);

enum class DivergenceKind { tv, kl, chi2 };

/// The TV/KL/chi-square bounds with the divergence taken between loss
/// pushforwards at the optimal action instead of between P and Q.
BoundPair pushforward_bounds(const DiscreteDist& p, const DiscreteDist& q,
                             const LossSpec& spec, DivergenceKind which);

/// rho_a W_d(P, Q) with per-action Lipschitz constants (declared constant
/// used when the spec carries one, else measured exhaustively).
BoundPair wasserstein_lipschitz_bound(const DiscreteDist& p,
                                      const DiscreteDist& q,
                                      const LossSpec& spec,
                                      const Eigen::MatrixXd& metric);

/// W_1 between the loss pushforwards on the line (unit Lipschitz constant).
BoundPair wasserstein_loss_pushforward_bound(const DiscreteDist& p,
                                             const DiscreteDist& q,
                                             const LossSpec& spec);

/// |H(P) - H(Q)| <= d_{A,l}(P, Q).
BoundReport semidistance_bound(const DiscreteDist& p, const DiscreteDist& q,
                               const LossSpec& spec);

/// Caller-supplied regularity constants for the density-gradient baseline.
struct BaselineExtras {
  std::optional<double> c1;
  std::optional<double> c2;
};

/// Literature baselines on |H_log(P) - H_log(Q)| and the variance gap:
/// the TV bound valid for d_TV <= 1/4, the optimal-coupling bound, the
/// regular-density Wasserstein bound, and the second-moment W_2 bound.
std::vector<BoundReport> baseline_bounds(const DiscreteDist& p,
                                         const DiscreteDist& q,
                                         const BaselineExtras& extras = {});

/// Mutual-information upper bounds from the entropy-difference machinery:
/// sqrt(E[gamma^2] L / 2), E[gamma^2] / 2, and sup gamma times the total
/// variation information. All require strictly positive conditionals.
std::vector<BoundReport> mi_upper_bounds(const JointDiscrete& j);

/// Binary entropy h2 in nats with the x log(1/x) -> 0 convention.
double binary_entropy(double p);

/// One cell of the Bernoulli bound-comparison grid: the log-range TV bound
/// against the optimal-coupling baseline.
struct Figure1Row {
  double p = 0.0;
  double q = 0.0;
  double bound_new = 0.0;
  double bound_zhang = 0.0;
  bool new_tighter = false;  // false on the diagonal by convention
};

/// Uniform open-interval grid i/(density+1), i = 1..density, both axes.
/// The tighter-region flag is symmetric in (p, q); violations throw.
std::vector<Figure1Row> figure1_grid(int density);

}  // namespace gentropy
