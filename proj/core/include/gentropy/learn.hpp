#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gentropy/bounds.hpp"
#include "gentropy/dist.hpp"
#include "gentropy/entropy.hpp"
#include "gentropy/loss.hpp"

namespace gentropy {

/// Raised when an iterative solver fails to reach its tolerance (exit code
/// 3 at the CLI).
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares slope of log(y) against log(n).
double fit_loglog_slope(const std::vector<int>& ns,
                        const std::vector<double>& ys);

// ---------------------------------------------------------------------------
// Frequentist ERM

struct ErmRun {
  int n = 0;
  std::size_t hypothesis = 0;
  double empirical_entropy = 0.0;
  double population_entropy = 0.0;
  double excess_risk = 0.0;
  double tv_to_truth = 0.0;
  double kl_to_truth = 0.0;
  double semidistance_to_truth = 0.0;
  bool typical = false;
  double epsilon = 0.1;
};

/// One ERM draw: sample n points, minimize empirical risk over the table's
/// actions with deterministic tie-break, score exactly against the known P.
ErmRun erm(const DiscreteDist& p, const LossSpec& table_spec, int n,
           std::uint64_t seed, std::uint64_t stream = 0, double epsilon = 0.1);

struct ErmSweepPoint {
  int n = 0;
  double mean_excess = 0.0;
  double mean_tv = 0.0;
  double mean_excess_curve = 0.0;  // sqrt(|Z|/n)
  std::vector<double> epsilons;
  std::vector<double> exceed_freq;   // empirical P[excess > eps]
  std::vector<double> exceed_curve;  // exp{-n(eps^2/2 - |Z| log(n+1)/n)}
};

/// Monte Carlo sweep over a sample-size grid for losses in [0, 1], with the
/// finite-alphabet theorem curves alongside.
std::vector<ErmSweepPoint> erm_sweep(const DiscreteDist& p,
                                     const LossSpec& table_spec,
                                     const std::vector<int>& n_grid,
                                     int trials, std::uint64_t seed,
                                     const std::vector<double>& epsilons);

// ---------------------------------------------------------------------------
// Lipschitz losses on a grid in R^{p+1}

/// A regression-style instance on a finite grid: outcomes z = (x, y) with
/// x in R^p, a table loss |y - f(x, a)| whose columns are rho_z-Lipschitz
/// in z w.r.t. the Euclidean metric.
struct LipschitzInstance {
  int p = 2;
  std::vector<std::vector<double>> points;  // z_i in R^{p+1}
  DiscreteDist dist;
  LossSpec loss;
  Eigen::MatrixXd metric;  // pairwise Euclidean distances
  double rho_f = 1.0;
  double rho_z = 0.0;  // sqrt(2) (rho_f v 1), validated exhaustively
};

/// Builds a seeded instance: side^p x-grid, y-grid of `side` levels in
/// [-1, 1], affine f(x, a) with gradient norm <= rho_f.
LipschitzInstance make_lipschitz_instance(int p, int side, int n_actions,
                                          double rho_f, std::uint64_t seed);

struct LipschitzRatePoint {
  int n = 0;
  double mean_w1 = 0.0;
  double mean_excess = 0.0;
  /// max over trials of excess - 2 rho_z W1 (soundness margin, <= 0).
  double max_excess_gap = 0.0;
};

struct LipschitzRateResult {
  std::vector<LipschitzRatePoint> points;
  double fitted_w1_exponent = 0.0;
  double rho_z = 0.0;
};

/// Empirical W1 decay (exact LP per trial) and ERM excess on the grid; the
/// decay exponent is fitted, absolute constants are not checked.
LipschitzRateResult lipschitz_rate_check(const LipschitzInstance& instance,
                                         const std::vector<int>& n_grid,
                                         int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Conditional entropy difference and mismatched decision rules

/// Raw expectation-difference bounds, the sqrt(D/2) KL chain-rule form for
/// losses in [0, 1], and the per-x decomposition when X marginals match.
std::vector<BoundReport> cond_entropy_diff_bounds(const JointDiscrete& pj,
                                                  const JointDiscrete& qj,
                                                  const LossSpec& spec);

struct MismatchResult {
  double excess = 0.0;  // E_P l(Y, psi_Q(X)) - H(P_{Y|X}|P_X), >= 0
  double b_q_tv = 0.0;
  double b_q_kl = 0.0;
  double b_p_per_x = 0.0;
  std::vector<BoundReport> reports;
};

/// Excess risk of the Bayes rule transported from Q into P, with the 2B
/// bounds from both theorem routes.
MismatchResult mismatch_excess(const JointDiscrete& pj,
                               const JointDiscrete& qj, const LossSpec& spec);

struct MismatchEstimatorResult {
  double excess = 0.0;
  double bound = 0.0;
  double chi2_pq = 0.0;
  double chi2_qp = 0.0;
};

/// Scalar estimation X = alpha Y + V with standard Gaussian noise: excess
/// of the Q-Bayes estimator under P by adaptive quadrature, against the
/// fourth-moment chi-square bound.
MismatchEstimatorResult mismatched_estimator_bound(const DiscreteDist& p_y,
                                                   const DiscreteDist& q_y,
                                                   double alpha,
                                                   double noise_sd = 1.0);

// ---------------------------------------------------------------------------
// Exponential families

/// Finite-support exponential family Q_theta(z) = nu(z) exp{theta' phi(z)
/// - A(theta)}. Minimality is probed at construction.
class ExpFamily {
 public:
  ExpFamily(Eigen::MatrixXd potential, std::vector<double> base);

  int dim() const { return static_cast<int>(potential_.cols()); }
  std::size_t support_size() const {
    return static_cast<std::size_t>(potential_.rows());
  }
  const Eigen::MatrixXd& potential() const { return potential_; }

  /// A(theta) by max-shifted summation; rejects exponent spreads beyond
  /// 700 after the shift.
  double log_partition(const Eigen::VectorXd& theta) const;
  /// grad A(theta) = E_{Q_theta}[phi(Z)], computed exactly.
  Eigen::VectorXd mean_parameter(const Eigen::VectorXd& theta) const;
  /// Hessian of A: Cov_{Q_theta}[phi(Z)].
  Eigen::MatrixXd covariance(const Eigen::VectorXd& theta) const;
  std::vector<double> probs(const Eigen::VectorXd& theta) const;
  DiscreteDist dist(const Eigen::VectorXd& theta,
                    std::vector<std::string> labels) const;

  Eigen::VectorXd mean_of(const DiscreteDist& target) const;

  /// Bernoulli family phi(z) = z, nu = 1 on {0, 1}.
  static ExpFamily bernoulli();

 private:
  Eigen::MatrixXd potential_;  // |Z| x d
  std::vector<double> base_;
};

struct ExpFamilyProjection {
  Eigen::VectorXd theta;
  std::vector<double> probs;
  int iterations = 0;
};

/// Moment-matching solve grad A(theta) = mu by damped Newton with the exact
/// Hessian; NonConvergenceError after 200 iterations (boundary mu).
ExpFamilyProjection expfam_project(const ExpFamily& fam,
                                   const Eigen::VectorXd& mu);
ExpFamilyProjection expfam_project(const ExpFamily& fam,
                                   const DiscreteDist& target);

struct ExpfamLearnPoint {
  int n = 0;
  double mean_excess = 0.0;
  double approx_term = 0.0;  // 2 d_TV(P, Q*), n-free
  double mean_estimation_term = 0.0;
  double median_estimation_term = 0.0;
  double decomposition_bound = 0.0;
  int boundary_retries = 0;
  /// max over trials of excess - (approx + per-trial estimation term); a
  /// sound run keeps this <= 0.
  double max_pointwise_gap = 0.0;
};

/// Learn-by-projection experiment: fit the family to each empirical
/// distribution, deploy its Bayes rule against P, and track the
/// approximation/estimation decomposition.
std::vector<ExpfamLearnPoint> expfam_learning_experiment(
    const JointDiscrete& pj, const ExpFamily& fam, const LossSpec& spec,
    const std::vector<int>& n_grid, int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bayesian minimum excess risk

struct LinearGaussianModel {
  Eigen::MatrixXd prior_cov;  // d x d, symmetric positive definite
  Eigen::MatrixXd features;   // |X| x d, phi(x) by design point
  double noise_var = 1.0;
  DiscreteDist design;  // P_X over the feature rows

  LinearGaussianModel(Eigen::MatrixXd prior_cov, Eigen::MatrixXd features,
                      double noise_var, DiscreteDist design);

  double s_g2() const;  // E ||phi(X)||^2
};

struct MerPoint {
  int n = 0;
  double mer2 = 0.0;
  double h2 = 0.0;  // H_2(W | Z^n) = E[tr posterior covariance]
  double relaxed_bound = 0.0;
  double theorem_bound = 0.0;  // sqrt(4 sigma^2 s_g^2 H2) + 2 s_g^2 H2
};

/// Exact conjugate posteriors per sampled design; MER_2 and H_2 averaged
/// over trials and the design distribution.
std::vector<MerPoint> mer_linear(const LinearGaussianModel& model,
                                 const std::vector<int>& n_grid, int trials,
                                 std::uint64_t seed);

struct NonlinearMerModel {
  std::vector<double> w_grid;  // <= 1000 atoms, near-uniform spacing
  std::vector<double> prior;
  Eigen::MatrixXd g;  // |X| x |W| table of g(x, w)
  double noise_var = 1.0;
  DiscreteDist design;

  NonlinearMerModel(std::vector<double> w_grid, std::vector<double> prior,
                    Eigen::MatrixXd g, double noise_var, DiscreteDist design);
};

struct NonlinearMerPoint {
  int n = 0;
  double mer_mc = 0.0;
  double h2 = 0.0;
  double posterior_kl = 0.0;  // E[D(K_{Y|X,W'} || K_{Y|X,W})]
  double posterior_kl_bound = 0.0;  // (s_g^2 / sigma^2) H2
  double theorem_bound = 0.0;
};

struct NonlinearMerResult {
  std::vector<NonlinearMerPoint> points;
  double s_g2 = 0.0;  // centered finite differences on the w grid
  double s_g2_forward = 0.0;
  double s_g2_backward = 0.0;
  bool coarse_grid_warning = false;
};

/// Exact discrete posteriors over the w grid per simulated dataset; checks
/// the posterior-sample KL chain and the MER upper bound numerically.
NonlinearMerResult mer_nonlinear_bound(const NonlinearMerModel& model,
                                       const std::vector<int>& n_grid,
                                       int trials, std::uint64_t seed);

}  // namespace gentropy
