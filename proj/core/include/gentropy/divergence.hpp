#pragma once

#include <Eigen/Dense>
#include <optional>

#include "gentropy/dist.hpp"
#include "gentropy/loss.hpp"

namespace gentropy {

/// Maximum support size accepted by the exact transport LP. Larger inputs
/// are rejected rather than approximated.
inline constexpr std::size_t kTransportCap = 64;

/// Total variation distance; requires a common support list.
double tv(const DiscreteDist& p, const DiscreteDist& q);

/// KL divergence in nats; +infinity when absolute continuity fails.
double kl(const DiscreteDist& p, const DiscreteDist& q);
double kl(const GaussianScalar& p, const GaussianScalar& q);

/// Chi-square divergence E_Q[(dP/dQ - 1)^2]; +infinity on support violation.
double chi2(const DiscreteDist& p, const DiscreteDist& q);

/// Shannon entropy / cross entropy in nats.
double shannon_entropy(const DiscreteDist& q);
double cross_entropy(const DiscreteDist& q, const DiscreteDist& p);

/// Renyi entropy of order alpha; alpha = 1 dispatches to the Shannon value.
double renyi_entropy(const DiscreteDist& q, double alpha);
/// Renyi cross entropy R_alpha(Q, P); alpha = 1 gives -E_Q[log P(Z)].
double renyi_cross(const DiscreteDist& q, const DiscreteDist& p, double alpha);

/// Variance of -log Q(Z) under Q, and of -log P(Z) under Q.
double varentropy(const DiscreteDist& q);
double cross_varentropy(const DiscreteDist& q, const DiscreteDist& p);

/// Order-1 Wasserstein distance on the line for numeric supports
/// (CDF-difference formula, exact for step CDFs).
double wasserstein1_1d(const DiscreteDist& p, const DiscreteDist& q);

/// Order-2 Wasserstein distance on the line by quantile coupling.
double wasserstein2_1d(const DiscreteDist& p, const DiscreteDist& q);

/// An optimal coupling between two distributions on a common support.
struct TransportPlan {
  Eigen::MatrixXd coupling;  // row sums = P, column sums = Q
  double cost = 0.0;
};

/// CSV emission (row, col, mass), zero cells skipped, row-major order.
void write_transport_plan_csv(std::ostream& os, const TransportPlan& plan);

/// Metric axioms: nonnegative, zero diagonal, symmetric; the triangle
/// inequality is validated exhaustively for supports up to 32.
void validate_metric(const Eigen::MatrixXd& d, std::size_t support_size);

/// Exact optimal transport under metric `d` via the transportation simplex.
TransportPlan wasserstein1_discrete(const DiscreteDist& p,
                                    const DiscreteDist& q,
                                    const Eigen::MatrixXd& d);

/// Distribution of l(Z, action) under P: atoms sorted ascending, equal loss
/// values merged. Zero-probability outcomes keep their atoms.
DiscreteDist pushforward(const DiscreteDist& p, const LossSpec& spec,
                         const Action& action);

/// (A,l)-semidistance sup_a |E_P l - E_Q l|; exact for table losses and the
/// zero-one loss, nullopt when the action set is not enumerable.
std::optional<double> semidistance_al(const DiscreteDist& p,
                                      const DiscreteDist& q,
                                      const LossSpec& spec);

/// Mutual information I(X;Y) of a finite joint, in nats.
double mutual_information(const JointDiscrete& j);

/// Lautum information L(X;Y) = D(P_X (x) P_Y || P_{X,Y}).
double lautum_information(const JointDiscrete& j);

/// Zero-one metric 1{i != k} and the line metric |z_i - z_k| over a support.
Eigen::MatrixXd zero_one_metric(std::size_t n);
Eigen::MatrixXd line_metric(const std::vector<double>& values);

}  // namespace gentropy
