#include "gentropy/learn.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gentropy/divergence.hpp"
#include "gentropy/rng.hpp"

namespace gentropy {
namespace {

LossSpec random_unit_table(CounterRng& rng, std::size_t nz, std::size_t na) {
  Eigen::MatrixXd v(nz, na);
  std::vector<std::string> zl(nz), al(na);
  for (std::size_t z = 0; z < nz; ++z) zl[z] = "z" + std::to_string(z);
  for (std::size_t a = 0; a < na; ++a) al[a] = "a" + std::to_string(a);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.next_double();
  return LossSpec::table(LossTable(zl, al, v));
}

JointDiscrete random_joint(CounterRng& rng, std::size_t nx, std::size_t ny,
                           double floor = 0.02) {
  Eigen::MatrixXd probs(nx, ny);
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    probs(i) = floor + rng.next_double();
    total += probs(i);
  }
  probs /= total;
  std::vector<std::string> xl(nx), yl(ny);
  for (std::size_t i = 0; i < nx; ++i) xl[i] = "x" + std::to_string(i);
  for (std::size_t i = 0; i < ny; ++i) yl[i] = "y" + std::to_string(i);
  return JointDiscrete(xl, yl, probs);
}

LossSpec y_table(CounterRng& rng, const std::vector<std::string>& yl,
                 std::size_t na) {
  Eigen::MatrixXd v(yl.size(), na);
  std::vector<std::string> al(na);
  for (std::size_t a = 0; a < na; ++a) al[a] = "a" + std::to_string(a);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.next_double();
  return LossSpec::table(LossTable(yl, al, v));
}

TEST(Erm, PointMassAndSingleActionGiveZeroExcess) {
  CounterRng rng(79);
  // Point-mass truth forces the empirical distribution to equal P.
  const DiscreteDist point({"z0", "z1"}, {1.0, 0.0});
  const LossSpec spec = random_unit_table(rng, 2, 4);
  const ErmRun run = erm(point, spec, 50, 5);
  EXPECT_NEAR(run.excess_risk, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(run.tv_to_truth, 0.0);

  // One action: nothing to get wrong.
  const DiscreteDist p({"z0", "z1"}, {0.3, 0.7});
  const LossSpec single = random_unit_table(rng, 2, 1);
  for (int t = 0; t < 20; ++t) {
    EXPECT_DOUBLE_EQ(erm(p, single, 10, 7, t).excess_risk, 0.0);
  }
  EXPECT_THROW(erm(p, single, 0, 7), std::invalid_argument);
}

TEST(Erm, ExcessBoundedByTwiceSemidistancePointwise) {
  CounterRng rng(83);
  const DiscreteDist p({"z0", "z1"}, {0.35, 0.65});
  const LossSpec spec = random_unit_table(rng, 2, 5);
  for (int t = 0; t < 200; ++t) {
    const ErmRun run = erm(p, spec, 8 + t % 64, 13, t);
    EXPECT_GE(run.excess_risk, -1e-10);
    EXPECT_LE(run.excess_risk, 2.0 * run.semidistance_to_truth + 1e-10);
    // ... and the coarser finite-Z route through d_TV for unit losses.
    EXPECT_LE(run.excess_risk, 2.0 * run.tv_to_truth + 1e-10);
    // Consistency of the stored fields.
    EXPECT_NEAR(run.excess_risk,
                expected_loss(p, spec, Action{run.hypothesis}) -
                    run.population_entropy,
                1e-10);
  }
}

TEST(Erm, TypicalRunsAreNearOptimal) {
  CounterRng rng(89);
  const DiscreteDist p({"z0", "z1", "z2"}, {0.2, 0.3, 0.5});
  const LossSpec spec = random_unit_table(rng, 3, 4);
  const double eps = 0.1;
  int typical_count = 0;
  for (int t = 0; t < 300; ++t) {
    const ErmRun run = erm(p, spec, 64, 17, t, eps);
    if (!run.typical) continue;
    ++typical_count;
    EXPECT_LE(std::abs(run.empirical_entropy - run.population_entropy),
              eps + 1e-12);
    EXPECT_LE(run.excess_risk, 2.0 * eps + 1e-12);
  }
  EXPECT_GT(typical_count, 0);
}

TEST(ErmSweep, TheoremCurveAndExceedance) {
  CounterRng rng(97);
  const DiscreteDist p({"z0", "z1"}, {0.4, 0.6});
  const LossSpec spec = random_unit_table(rng, 2, 3);
  const auto points = erm_sweep(p, spec, {50, 200}, 200, 23, {0.3});
  ASSERT_EQ(points.size(), 2u);
  EXPECT_NEAR(points[1].mean_excess_curve, 0.1, 1e-15);  // sqrt(2/200)
  for (const auto& pt : points) {
    EXPECT_LE(pt.mean_excess, pt.mean_excess_curve);
    for (std::size_t e = 0; e < pt.epsilons.size(); ++e) {
      if (pt.exceed_curve[e] < 1.0) {
        EXPECT_LE(pt.exceed_freq[e], pt.exceed_curve[e] + 1e-12);
      }
    }
  }
}

TEST(ErmSweep, BinaryClassificationEncoding) {
  // Z = X x Y with |X| = 3, Y = {0,1}; A = all 8 mappings X -> Y under the
  // zero-one prediction loss. The theorem curve is sqrt(2|X|/n).
  const std::size_t nx = 3;
  const std::size_t n_actions = 8;
  std::vector<std::string> zl;
  std::vector<double> pz;
  CounterRng rng(101);
  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (int y = 0; y < 2; ++y) {
      zl.push_back("x" + std::to_string(x) + "y" + std::to_string(y));
      pz.push_back(0.05 + rng.next_double());
      total += pz.back();
    }
  }
  for (double& w : pz) w /= total;
  Eigen::MatrixXd v(zl.size(), n_actions);
  std::vector<std::string> al(n_actions);
  for (std::size_t a = 0; a < n_actions; ++a) {
    al[a] = "map" + std::to_string(a);
    for (std::size_t x = 0; x < nx; ++x) {
      const int predicted = static_cast<int>((a >> x) & 1);
      for (int y = 0; y < 2; ++y) {
        v(static_cast<Eigen::Index>(2 * x + static_cast<std::size_t>(y)),
          static_cast<Eigen::Index>(a)) = (y == predicted) ? 0.0 : 1.0;
      }
    }
  }
  const DiscreteDist p(zl, pz);
  const LossSpec spec = LossSpec::table(LossTable(zl, al, v));
  const auto points = erm_sweep(p, spec, {100}, 150, 29, {});
  EXPECT_NEAR(points[0].mean_excess_curve, std::sqrt(2.0 * nx / 100.0),
              1e-15);
  EXPECT_LE(points[0].mean_excess, points[0].mean_excess_curve);
}

TEST(ErmSweep, EmpiricalTvRateSmokeTest) {
  CounterRng rng(103);
  std::vector<std::string> zl(8);
  for (std::size_t i = 0; i < 8; ++i) zl[i] = "z" + std::to_string(i);
  const DiscreteDist p = DiscreteDist::uniform(zl);
  const LossSpec spec = random_unit_table(rng, 8, 3);
  const std::vector<int> grid{16, 64, 256, 1024};
  const auto points = erm_sweep(p, spec, grid, 60, 31, {});
  std::vector<double> tvs;
  for (const auto& pt : points) tvs.push_back(pt.mean_tv);
  const double slope = fit_loglog_slope(grid, tvs);
  EXPECT_GT(slope, -0.7);
  EXPECT_LT(slope, -0.3);
}

TEST(Lipschitz, PointMassHasZeroW1) {
  LipschitzInstance inst = make_lipschitz_instance(2, 3, 4, 1.5, 7);
  // Collapse the distribution to a point mass on the same support.
  std::vector<double> w(inst.dist.size(), 0.0);
  w[0] = 1.0;
  inst.dist = DiscreteDist(inst.dist.outcomes(), w);
  const auto result = lipschitz_rate_check(inst, {4, 16}, 10, 3);
  for (const auto& pt : result.points) {
    EXPECT_NEAR(pt.mean_w1, 0.0, 1e-12);
    EXPECT_NEAR(pt.mean_excess, 0.0, 1e-12);
  }
}

TEST(Lipschitz, ExcessDominatedByW1Pointwise) {
  const LipschitzInstance inst = make_lipschitz_instance(2, 3, 5, 2.0, 11);
  EXPECT_NEAR(inst.rho_z, std::sqrt(2.0) * 2.0, 1e-15);
  const auto result = lipschitz_rate_check(inst, {8, 32, 128}, 25, 13);
  for (const auto& pt : result.points) {
    EXPECT_LE(pt.max_excess_gap, 1e-10);
  }
  EXPECT_LT(result.fitted_w1_exponent, 0.0);
  EXPECT_THROW(make_lipschitz_instance(5, 3, 4, 1.0, 7),
               std::invalid_argument);
}

TEST(CondEntropyDiff, IdenticalJointsGiveZeroBounds) {
  CounterRng rng(107);
  const JointDiscrete j = random_joint(rng, 3, 3);
  const LossSpec spec = y_table(rng, j.y_outcomes(), 3);
  const auto reports = cond_entropy_diff_bounds(j, j, spec);
  for (const auto& r : reports) {
    if (r.applicable) EXPECT_NEAR(*r.value, 0.0, 1e-12) << r.name;
  }
}

TEST(CondEntropyDiff, KlChainRuleSplitsJointDivergence) {
  CounterRng rng(109);
  const JointDiscrete pj = random_joint(rng, 3, 3);
  const JointDiscrete qj = random_joint(rng, 3, 3);
  const LossSpec spec = y_table(rng, pj.y_outcomes(), 3);
  const auto reports = cond_entropy_diff_bounds(pj, qj, spec);
  const auto chain = std::find_if(reports.begin(), reports.end(),
                                  [](const BoundReport& r) {
                                    return r.name == "cond.kl-chain";
                                  });
  ASSERT_NE(chain, reports.end());
  ASSERT_TRUE(chain->applicable);
  // Recompute the two chain-rule pieces from the conditions and check they
  // add up to the joint divergence.
  const double d_joint = kl(pj.flatten(), qj.flatten());
  double d_x = kl(pj.marginal_x(), qj.marginal_x());
  double d_cond = 0.0;
  const DiscreteDist px = pj.marginal_x();
  for (std::size_t x = 0; x < pj.x_size(); ++x) {
    d_cond += px.prob(x) *
              kl(pj.conditional_y_given_x(x), qj.conditional_y_given_x(x));
  }
  EXPECT_NEAR(d_joint, d_x + d_cond, 1e-12);
  EXPECT_NEAR(*chain->value, std::sqrt(0.5 * d_joint), 1e-12);

  // The chain bound dominates the conditional entropy difference.
  const double diff = conditional_entropy(pj, spec).value -
                      conditional_entropy(qj, spec).value;
  EXPECT_GE(*chain->value, std::abs(diff) - 1e-9);
}

TEST(CondEntropyDiff, SharedMarginalPerXDecomposition) {
  CounterRng rng(113);
  const DiscreteDist px({"x0", "x1"}, {0.4, 0.6});
  // Two conditionals per joint, shared X marginal.
  const auto make = [&](double a, double b) {
    Eigen::MatrixXd probs(2, 2);
    probs << 0.4 * a, 0.4 * (1 - a), 0.6 * b, 0.6 * (1 - b);
    return JointDiscrete({"x0", "x1"}, {"y0", "y1"}, probs);
  };
  const JointDiscrete pj = make(0.3, 0.8);
  const JointDiscrete qj = make(0.5, 0.6);
  const LossSpec spec = y_table(rng, pj.y_outcomes(), 2);
  const auto reports = cond_entropy_diff_bounds(pj, qj, spec);
  const auto per_x = std::find_if(reports.begin(), reports.end(),
                                  [](const BoundReport& r) {
                                    return r.name == "cond.per-x.upper";
                                  });
  ASSERT_NE(per_x, reports.end());
  ASSERT_TRUE(per_x->applicable);
  // Upper bounds the conditional entropy difference.
  const double diff = conditional_entropy(pj, spec).value -
                      conditional_entropy(qj, spec).value;
  EXPECT_GE(*per_x->value, diff - 1e-12);
}

TEST(MismatchExcess, IdenticalJointsAndBruteForceOracle) {
  CounterRng rng(127);
  const JointDiscrete j = random_joint(rng, 3, 3);
  const LossSpec spec = y_table(rng, j.y_outcomes(), 3);
  const MismatchResult same = mismatch_excess(j, j, spec);
  EXPECT_NEAR(same.excess, 0.0, 1e-12);

  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t nx = 2 + rng.next_u64() % 3;
    const std::size_t ny = 2 + rng.next_u64() % 3;
    const std::size_t na = 2 + rng.next_u64() % 2;
    const JointDiscrete pj = random_joint(rng, nx, ny);
    const JointDiscrete qj = random_joint(rng, nx, ny);
    const LossSpec spec2 = y_table(rng, pj.y_outcomes(), na);
    const MismatchResult r = mismatch_excess(pj, qj, spec2);
    EXPECT_GE(r.excess, -1e-10);
    EXPECT_LE(r.excess, 2.0 * r.b_q_tv + 1e-9);
    EXPECT_LE(r.excess, 2.0 * r.b_q_kl + 1e-9);
    EXPECT_LE(r.excess, 2.0 * r.b_p_per_x + 1e-9);

    // Independent oracle: the Bayes risk by exhaustive enumeration of all
    // |A|^|X| deterministic rules.
    const DiscreteDist px = pj.marginal_x();
    double best = std::numeric_limits<double>::infinity();
    std::size_t n_rules = 1;
    for (std::size_t x = 0; x < nx; ++x) n_rules *= na;
    for (std::size_t code = 0; code < n_rules; ++code) {
      double risk = 0.0;
      std::size_t rem = code;
      for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t a = rem % na;
        rem /= na;
        for (std::size_t y = 0; y < ny; ++y) {
          risk += pj.probs()(static_cast<Eigen::Index>(x),
                             static_cast<Eigen::Index>(y)) *
                  eval_loss_at(spec2, pj.y_outcomes(), y, Action{a});
        }
      }
      best = std::min(best, risk);
    }
    const double bayes = conditional_entropy(pj, spec2).value;
    EXPECT_NEAR(bayes, best, 1e-10);
  }
}

TEST(MismatchExcess, FlippedMapRule) {
  // Q flips the Y columns of P, so psi_Q is P's anti-MAP rule; the excess
  // equals the exhaustively computed gap and respects both 2B routes.
  Eigen::MatrixXd pp(2, 2);
  pp << 0.40, 0.10, 0.15, 0.35;
  const JointDiscrete pj({"x0", "x1"}, {"y0", "y1"}, pp);
  Eigen::MatrixXd qq(2, 2);
  qq << 0.10, 0.40, 0.35, 0.15;
  const JointDiscrete qj({"x0", "x1"}, {"y0", "y1"}, qq);
  Eigen::MatrixXd unit(2, 2);
  unit << 0.0, 1.0, 1.0, 0.0;
  const LossSpec spec =
      LossSpec::table(LossTable({"y0", "y1"}, {"p0", "p1"}, unit));

  const MismatchResult r = mismatch_excess(pj, qj, spec);
  // Anti-MAP risk under P: picks the minority label everywhere.
  const double anti_map_risk = 0.40 + 0.35;
  const double bayes = conditional_entropy(pj, spec).value;
  EXPECT_NEAR(bayes, 0.10 + 0.15, 1e-14);
  EXPECT_NEAR(r.excess, anti_map_risk - bayes, 1e-14);
  EXPECT_LE(r.excess, 2.0 * r.b_q_tv + 1e-12);
  EXPECT_LE(r.excess, 2.0 * r.b_p_per_x + 1e-12);
}

TEST(MismatchedEstimator, EqualPriorsAndUninformativeObservation) {
  const DiscreteDist p({"-1", "1"}, {0.5, 0.5});
  const MismatchEstimatorResult same = mismatched_estimator_bound(p, p, 1.0);
  EXPECT_NEAR(same.excess, 0.0, 1e-8);
  EXPECT_NEAR(same.bound, 0.0, 1e-8);

  // alpha = 0: X carries nothing, psi_Q is the prior mean, and the excess
  // collapses to the squared mean gap.
  const DiscreteDist q({"-1", "1"}, {0.4, 0.6});
  const MismatchEstimatorResult r = mismatched_estimator_bound(p, q, 0.0);
  const double mean_gap = 0.2;  // E_Q Y - E_P Y
  EXPECT_NEAR(r.excess, mean_gap * mean_gap, 1e-7);
  EXPECT_LE(r.excess, r.bound + 1e-9);
}

TEST(MismatchedEstimator, TwoPointQuadratureBound) {
  const DiscreteDist p({"-1", "1"}, {0.5, 0.5});
  const DiscreteDist q({"-1", "1"}, {0.4, 0.6});
  const MismatchEstimatorResult r = mismatched_estimator_bound(p, q, 1.0);
  EXPECT_GE(r.excess, -1e-8);
  EXPECT_GT(r.excess, 0.0);
  EXPECT_LE(r.excess, r.bound + 1e-9);
  EXPECT_NEAR(r.chi2_pq, chi2(p, q), 1e-14);
}

TEST(ExpFamily, BernoulliClosedForms) {
  const ExpFamily fam = ExpFamily::bernoulli();
  for (double theta : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    Eigen::VectorXd t(1);
    t << theta;
    EXPECT_NEAR(fam.log_partition(t), std::log(1.0 + std::exp(theta)), 1e-12);
    EXPECT_NEAR(fam.mean_parameter(t)(0),
                std::exp(theta) / (1.0 + std::exp(theta)), 1e-12);
  }
  // theta = 0: A = log sum(nu) and Q_0 proportional to nu.
  Eigen::MatrixXd phi(3, 1);
  phi << 0.0, 1.0, 2.0;
  const ExpFamily weighted(phi, {1.0, 2.0, 1.0});
  Eigen::VectorXd zero(1);
  zero << 0.0;
  EXPECT_NEAR(weighted.log_partition(zero), std::log(4.0), 1e-14);
  EXPECT_NEAR(weighted.probs(zero)[1], 0.5, 1e-14);
  // Uniform base: mean at 0 is the average potential.
  const ExpFamily uniform_base(phi, {1.0, 1.0, 1.0});
  EXPECT_NEAR(uniform_base.mean_parameter(zero)(0), 1.0, 1e-14);
}

TEST(ExpFamily, RejectsNonMinimalAndOverflow) {
  Eigen::MatrixXd constant(2, 1);
  constant << 1.0, 1.0;  // phi constant: all theta give the same member
  EXPECT_THROW(ExpFamily(constant, {1.0, 1.0}), std::invalid_argument);

  const ExpFamily fam = ExpFamily::bernoulli();
  Eigen::VectorXd huge(1);
  huge << 1e4;
  EXPECT_THROW(fam.log_partition(huge), std::invalid_argument);
}

TEST(ExpFamilyProject, BernoulliLogitAndSelfProjection) {
  const ExpFamily fam = ExpFamily::bernoulli();
  Eigen::VectorXd mu(1);
  mu << 0.3;
  const ExpFamilyProjection proj = expfam_project(fam, mu);
  EXPECT_NEAR(proj.theta(0), -0.8472978603872036, 1e-8);
  EXPECT_LT((fam.mean_parameter(proj.theta) - mu).cwiseAbs().maxCoeff(),
            1e-8);

  // A target already in the family projects onto itself.
  Eigen::VectorXd theta0(1);
  theta0 << 0.7;
  const DiscreteDist member = fam.dist(theta0, {"0", "1"});
  const ExpFamilyProjection self = expfam_project(fam, member);
  EXPECT_LT(kl(member, DiscreteDist({"0", "1"}, self.probs)), 1e-10);
}

TEST(ExpFamilyProject, OptimalityCertificateAndBoundary) {
  CounterRng rng(131);
  Eigen::MatrixXd phi(4, 2);
  phi << 0, 0, 1, 0, 0, 1, 1, 1;
  const ExpFamily fam(phi, {1.0, 1.0, 1.0, 1.0});
  const DiscreteDist target({"00", "10", "01", "11"}, {0.4, 0.3, 0.2, 0.1});
  const ExpFamilyProjection proj = expfam_project(fam, target);
  const DiscreteDist q_star(target.outcomes(), proj.probs);
  const double d_star = kl(target, q_star);
  for (int probe = 0; probe < 100; ++probe) {
    Eigen::VectorXd theta(2);
    theta << 4.0 * rng.next_double() - 2.0, 4.0 * rng.next_double() - 2.0;
    const DiscreteDist q(target.outcomes(), fam.probs(theta));
    EXPECT_LE(d_star, kl(target, q) + 1e-9);
  }

  // Point-mass target: boundary mean, no stationary point.
  const DiscreteDist boundary({"00", "10", "01", "11"}, {1.0, 0.0, 0.0, 0.0});
  EXPECT_THROW(expfam_project(fam, boundary), NonConvergenceError);
}

TEST(ExpfamLearning, RealizableTruthHasNoApproximationError) {
  const ExpFamily fam = [&] {
    Eigen::MatrixXd phi(4, 2);
    phi << 0, 0, 1, 0, 0, 1, 1, 1;
    return ExpFamily(phi, {1.0, 1.0, 1.0, 1.0});
  }();
  // Truth inside the family (product Bernoulli over the 2x2 joint).
  Eigen::VectorXd theta(2);
  theta << 0.4, -0.3;
  const auto probs = fam.probs(theta);
  Eigen::MatrixXd joint(2, 2);
  joint << probs[0], probs[2], probs[1], probs[3];  // x-major layout
  const JointDiscrete pj({"x0", "x1"}, {"y0", "y1"}, joint);

  CounterRng rng(137);
  const LossSpec spec = y_table(rng, pj.y_outcomes(), 2);
  const auto points = expfam_learning_experiment(pj, fam, spec,
                                                 {32, 128, 512}, 40, 41);
  for (const auto& pt : points) {
    EXPECT_NEAR(pt.approx_term, 0.0, 1e-7);
    EXPECT_LE(pt.max_pointwise_gap, 1e-9);
  }
  EXPECT_LE(points.back().mean_excess, points.front().mean_excess + 1e-9);
}

TEST(ExpfamLearning, ApproximationTermIsNFree) {
  // A 2-parameter family over |Z| = 6 cannot express a generic joint.
  Eigen::MatrixXd phi(6, 2);
  phi << 0, 0, 1, 0, 2, 0, 0, 1, 1, 1, 2, 1;
  const ExpFamily fam(phi, {1, 1, 1, 1, 1, 1});
  CounterRng rng(139);
  const JointDiscrete pj = random_joint(rng, 3, 2);
  const LossSpec spec = y_table(rng, pj.y_outcomes(), 2);
  const auto points =
      expfam_learning_experiment(pj, fam, spec, {16, 64, 256}, 30, 43);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_GT(points[0].approx_term, 0.0);
  // Exactly n-free: the same double in every row.
  EXPECT_EQ(points[0].approx_term, points[1].approx_term);
  EXPECT_EQ(points[1].approx_term, points[2].approx_term);
  for (const auto& pt : points) {
    EXPECT_LE(pt.max_pointwise_gap, 1e-9);
    EXPECT_LE(pt.mean_excess, pt.decomposition_bound + 1e-9);
  }
}

TEST(MerLinear, ScalarClosedForm) {
  const DiscreteDist design({"x"}, {1.0});
  Eigen::MatrixXd features(1, 1);
  features << 1.0;
  Eigen::MatrixXd prior(1, 1);
  prior << 1.0;
  const LinearGaussianModel model(prior, features, 1.0, design);
  EXPECT_NEAR(model.s_g2(), 1.0, 1e-15);

  std::vector<int> grid;
  for (int n = 1; n <= 64; ++n) grid.push_back(n);
  const auto points = mer_linear(model, grid, 3, 7);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& pt : points) {
    const double exact = 1.0 / (pt.n + 1.0);
    EXPECT_NEAR(pt.mer2, exact, 1e-9);
    EXPECT_NEAR(pt.h2, exact, 1e-9);
    EXPECT_NEAR(pt.relaxed_bound, exact, 1e-9);
    EXPECT_NEAR(pt.theorem_bound,
                2.0 / std::sqrt(pt.n + 1.0) + 2.0 / (pt.n + 1.0), 1e-9);
    EXPECT_GE(pt.theorem_bound, pt.mer2);
    EXPECT_LE(pt.mer2, prev + 1e-12);
    prev = pt.mer2;
  }
}

TEST(MerLinear, MultivariateDesignBounds) {
  CounterRng rng(149);
  const DiscreteDist design({"a", "b", "c"}, {0.3, 0.3, 0.4});
  Eigen::MatrixXd features(3, 2);
  features << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  Eigen::MatrixXd prior(2, 2);
  prior << 1.0, 0.2, 0.2, 0.5;
  const LinearGaussianModel model(prior, features, 0.5, design);
  const auto points = mer_linear(model, {1, 4, 16, 64}, 40, 11);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& pt : points) {
    EXPECT_GE(pt.relaxed_bound, pt.mer2 - 1e-12);
    EXPECT_GE(pt.theorem_bound, pt.mer2 - 1e-12);
    EXPECT_LE(pt.mer2, prev + 0.01);  // Monte Carlo slack
    prev = pt.mer2;
  }
  EXPECT_LT(points.back().mer2, 0.05);
}

NonlinearMerModel sine_model(int n_w, double lo, double hi) {
  std::vector<double> w_grid(static_cast<std::size_t>(n_w));
  for (int k = 0; k < n_w; ++k) {
    w_grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n_w - 1);
  }
  std::vector<double> prior(w_grid.size(), 1.0 / n_w);
  const DiscreteDist design({"0.5", "1.0", "2.0"}, {0.4, 0.3, 0.3});
  const std::vector<double> xs{0.5, 1.0, 2.0};
  Eigen::MatrixXd g(3, n_w);
  for (std::size_t x = 0; x < 3; ++x) {
    for (int k = 0; k < n_w; ++k) {
      g(static_cast<Eigen::Index>(x), k) =
          std::sin(w_grid[static_cast<std::size_t>(k)] * xs[x]);
    }
  }
  return NonlinearMerModel(std::move(w_grid), std::move(prior), std::move(g),
                           1.0, design);
}

TEST(MerNonlinear, ConstantRegressionHasZeroMer) {
  std::vector<double> w_grid{0.0, 0.5, 1.0};
  std::vector<double> prior{0.25, 0.5, 0.25};
  const DiscreteDist design({"x"}, {1.0});
  Eigen::MatrixXd g(1, 3);
  g << 2.0, 2.0, 2.0;  // constant in w
  const NonlinearMerModel model(w_grid, prior, g, 1.0, design);
  const auto result = mer_nonlinear_bound(model, {1, 8}, 20, 3);
  EXPECT_NEAR(result.s_g2, 0.0, 1e-12);
  for (const auto& pt : result.points) {
    EXPECT_NEAR(pt.mer_mc, 0.0, 1e-12);
    EXPECT_GE(pt.theorem_bound, 0.0);
  }
}

TEST(MerNonlinear, SineBoundDominatesMonteCarloMer) {
  const NonlinearMerModel model = sine_model(201, 0.0, 3.14159265358979);
  const auto result = mer_nonlinear_bound(model, {1, 4, 16, 64}, 200, 5);
  EXPECT_FALSE(result.coarse_grid_warning);
  for (const auto& pt : result.points) {
    EXPECT_GE(pt.theorem_bound, pt.mer_mc - 1e-12);
    EXPECT_LE(pt.posterior_kl, pt.posterior_kl_bound + 1e-12);
  }
}

TEST(MerNonlinear, LinearCrossOracle) {
  // g(x, w) = w on a fine grid with a discretized standard normal prior
  // reproduces the scalar conjugate model.
  const int n_w = 801;
  std::vector<double> w_grid(n_w);
  std::vector<double> prior(n_w);
  double mass = 0.0;
  for (int k = 0; k < n_w; ++k) {
    const double w = -4.0 + 8.0 * k / (n_w - 1);
    w_grid[static_cast<std::size_t>(k)] = w;
    prior[static_cast<std::size_t>(k)] = std::exp(-0.5 * w * w);
    mass += prior[static_cast<std::size_t>(k)];
  }
  for (double& p : prior) p /= mass;
  const DiscreteDist design({"x"}, {1.0});
  Eigen::MatrixXd g(1, n_w);
  for (int k = 0; k < n_w; ++k) g(0, k) = w_grid[static_cast<std::size_t>(k)];
  const NonlinearMerModel model(w_grid, prior, g, 1.0, design);
  const auto result = mer_nonlinear_bound(model, {1, 4, 16}, 300, 17);

  Eigen::MatrixXd features(1, 1), prior_cov(1, 1);
  features << 1.0;
  prior_cov << 1.0;
  const LinearGaussianModel linear(prior_cov, features, 1.0, design);
  const auto exact = mer_linear(linear, {1, 4, 16}, 1, 17);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    EXPECT_NEAR(result.points[i].mer_mc, exact[i].mer2, 1e-3);
  }
}

TEST(FitLoglogSlope, RecoversPowerLaws) {
  std::vector<int> ns{10, 100, 1000};
  std::vector<double> ys;
  for (int n : ns) ys.push_back(5.0 * std::pow(n, -0.5));
  EXPECT_NEAR(fit_loglog_slope(ns, ys), -0.5, 1e-12);
  EXPECT_THROW(fit_loglog_slope({1}, {1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace gentropy
