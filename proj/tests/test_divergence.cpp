#include "gentropy/divergence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gentropy/rng.hpp"

namespace gentropy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DiscreteDist random_dist(CounterRng& rng, std::size_t n, double floor = 0.02) {
  std::vector<std::string> labels(n);
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = "z" + std::to_string(i);
    w[i] = floor + rng.next_double();
    total += w[i];
  }
  for (double& x : w) x /= total;
  return DiscreteDist(std::move(labels), std::move(w));
}

TEST(Tv, Examples) {
  const DiscreteDist p({"a", "b"}, {0.6, 0.4});
  const DiscreteDist q({"a", "b"}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(tv(p, p), 0.0);
  EXPECT_NEAR(tv(p, q), 0.1, 1e-15);
  const DiscreteDist e1({"a", "b"}, {1.0, 0.0});
  const DiscreteDist e2({"a", "b"}, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(tv(e1, e2), 1.0);
  const DiscreteDist other_support({"x", "y"}, {0.5, 0.5});
  EXPECT_THROW(tv(p, other_support), std::invalid_argument);
}

TEST(Kl, DiscreteAndGaussian) {
  const DiscreteDist p({"a", "b"}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(kl(p, p), 0.0);
  EXPECT_EQ(kl(p, DiscreteDist({"a", "b"}, {1.0, 0.0})), kInf);
  EXPECT_NEAR(kl(GaussianScalar(0.5, 1.0), GaussianScalar(0.0, 1.0)), 0.125,
              1e-15);
}

TEST(Chi2, Examples) {
  const DiscreteDist p({"a", "b"}, {0.5, 0.5});
  const DiscreteDist q({"a", "b"}, {0.25, 0.75});
  EXPECT_DOUBLE_EQ(chi2(p, p), 0.0);
  EXPECT_NEAR(chi2(p, q), 1.0 / 3.0, 1e-15);

  // Padding with zero-mass outcomes does not change the value; a Q zero
  // under P mass blows up.
  const DiscreteDist p3({"a", "b", "c"}, {0.5, 0.5, 0.0});
  const DiscreteDist q3({"a", "b", "c"}, {0.5, 0.5, 0.0});
  EXPECT_DOUBLE_EQ(chi2(p3, q3), 0.0);
  const DiscreteDist p_mass({"a", "b", "c"}, {0.25, 0.25, 0.5});
  EXPECT_EQ(chi2(p_mass, q3), kInf);
}

TEST(Renyi, UniformInvarianceAndLimit) {
  const DiscreteDist u = DiscreteDist::uniform({"a", "b", "c", "d", "e"});
  for (double alpha : {-2.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    EXPECT_NEAR(renyi_entropy(u, alpha), std::log(5.0), 1e-12);
  }

  const DiscreteDist q({"a", "b", "c"}, {0.2, 0.3, 0.5});
  const double h = shannon_entropy(q);
  // Two-sided probe at alpha = 1 +- 1e-4: the symmetric average cancels the
  // first-order varentropy term, and each side sits within varentropy *
  // epsilon of the limit.
  const double above = renyi_entropy(q, 1.0 + 1e-4);
  const double below = renyi_entropy(q, 1.0 - 1e-4);
  EXPECT_NEAR(0.5 * (above + below), h, 1e-6);
  EXPECT_NEAR(above, h, varentropy(q) * 1e-4);
  EXPECT_NEAR(below, h, varentropy(q) * 1e-4);

  const DiscreteDist p({"a", "b", "c"}, {0.5, 0.25, 0.25});
  EXPECT_NEAR(renyi_cross(q, p, 1.0), cross_entropy(q, p), 1e-15);
}

TEST(Renyi, SupportViolationConventions) {
  const DiscreteDist q({"a", "b"}, {0.5, 0.5});
  const DiscreteDist p({"a", "b"}, {1.0, 0.0});
  EXPECT_EQ(renyi_cross(q, p, 0.5), kInf);
  EXPECT_EQ(renyi_cross(q, p, 1.0), kInf);
}

TEST(Varentropy, UniformIsZero) {
  EXPECT_NEAR(varentropy(DiscreteDist::uniform({"a", "b", "c"})), 0.0, 1e-15);
  const DiscreteDist q({"a", "b"}, {0.25, 0.75});
  EXPECT_GT(varentropy(q), 0.0);
}

TEST(Wasserstein1d, Examples) {
  const DiscreteDist d0({"0"}, {1.0});
  const DiscreteDist d1({"1"}, {1.0});
  EXPECT_DOUBLE_EQ(wasserstein1_1d(d0, d1), 1.0);
  const DiscreteDist coin({"0", "1"}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(wasserstein1_1d(coin, coin), 0.0);
  const DiscreteDist d0_padded({"0", "1"}, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(wasserstein1_1d(coin, d0_padded), 0.5);
  EXPECT_THROW(wasserstein1_1d(DiscreteDist({"a"}, {1.0}), d0),
               std::invalid_argument);
}

TEST(Wasserstein2, PointMassesAndScale) {
  const DiscreteDist a({"-1"}, {1.0});
  const DiscreteDist b({"3"}, {1.0});
  EXPECT_DOUBLE_EQ(wasserstein2_1d(a, b), 4.0);
  // Two-point vs point: W2^2 = 0.5 (0-0)^2 + 0.5 (1-0)^2.
  const DiscreteDist coin({"0", "1"}, {0.5, 0.5});
  const DiscreteDist zero({"0", "1"}, {1.0, 0.0});
  EXPECT_NEAR(wasserstein2_1d(coin, zero), std::sqrt(0.5), 1e-15);
}

TEST(TransportLp, ZeroOneMetricEqualsTv) {
  CounterRng rng(37);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng.next_u64() % 9;
    const DiscreteDist p = random_dist(rng, n, 0.0);
    const DiscreteDist q = random_dist(rng, n, 0.0);
    const TransportPlan plan = wasserstein1_discrete(p, q, zero_one_metric(n));
    EXPECT_NEAR(plan.cost, tv(p, q), 1e-10);
  }
}

TEST(TransportLp, IdenticalMarginalsGiveDiagonalPlan) {
  const DiscreteDist p({"a", "b", "c"}, {0.2, 0.3, 0.5});
  const TransportPlan plan = wasserstein1_discrete(p, p, zero_one_metric(3));
  EXPECT_NEAR(plan.cost, 0.0, 1e-15);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(plan.coupling(i, i), p.prob(static_cast<std::size_t>(i)),
                1e-12);
  }
}

TEST(TransportLp, SingleRouteTransport) {
  const DiscreteDist p({"0", "1", "2"}, {1.0, 0.0, 0.0});
  const DiscreteDist q({"0", "1", "2"}, {0.0, 0.0, 1.0});
  const TransportPlan plan =
      wasserstein1_discrete(p, q, line_metric({0.0, 1.0, 2.0}));
  EXPECT_NEAR(plan.cost, 2.0, 1e-12);
}

TEST(TransportLp, LineMetricMatchesCdfFormula) {
  CounterRng rng(41);
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t n = 2 + rng.next_u64() % 15;
    std::vector<std::string> labels(n);
    std::vector<double> values(n);
    double v = -2.0;
    for (std::size_t i = 0; i < n; ++i) {
      v += 0.1 + 2.0 * rng.next_double();
      values[i] = v;
      labels[i] = numeric_label(v);
    }
    const auto weights = [&] {
      std::vector<double> w(n);
      double total = 0.0;
      for (double& x : w) {
        x = rng.next_double();
        total += x;
      }
      for (double& x : w) x /= total;
      return w;
    };
    const DiscreteDist p(labels, weights());
    const DiscreteDist q(labels, weights());
    const TransportPlan plan = wasserstein1_discrete(p, q, line_metric(values));
    EXPECT_NEAR(plan.cost, wasserstein1_1d(p, q), 1e-8);
    // Marginals of the coupling reproduce the inputs.
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(plan.coupling.row(static_cast<Eigen::Index>(i)).sum(),
                  p.prob(i), 1e-10);
      EXPECT_NEAR(plan.coupling.col(static_cast<Eigen::Index>(i)).sum(),
                  q.prob(i), 1e-10);
    }
  }
}

TEST(TransportLp, RejectsMetricViolations) {
  const DiscreteDist p({"a", "b"}, {0.5, 0.5});
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(wasserstein1_discrete(p, p, asym), std::invalid_argument);

  const DiscreteDist p3({"a", "b", "c"}, {0.4, 0.3, 0.3});
  Eigen::MatrixXd no_triangle(3, 3);
  no_triangle << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  EXPECT_THROW(wasserstein1_discrete(p3, p3, no_triangle),
               std::invalid_argument);

  Eigen::MatrixXd bad_diag = zero_one_metric(2);
  bad_diag(0, 0) = 0.5;
  EXPECT_THROW(wasserstein1_discrete(p, p, bad_diag), std::invalid_argument);
}

TEST(TransportLp, RejectsOversizedSupports) {
  const std::size_t n = kTransportCap + 1;
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  const DiscreteDist p = DiscreteDist::uniform(labels);
  EXPECT_THROW(wasserstein1_discrete(p, p, zero_one_metric(n)),
               std::invalid_argument);
}

TEST(Pushforward, MergesEqualValuesSorted) {
  Eigen::MatrixXd v(3, 1);
  v << 0.2, 0.2, 0.5;
  const LossSpec spec =
      LossSpec::table(LossTable({"a", "b", "c"}, {"a0"}, v));
  const DiscreteDist p({"a", "b", "c"}, {0.25, 0.25, 0.5});
  const DiscreteDist pf = pushforward(p, spec, Action{std::size_t{0}});
  ASSERT_EQ(pf.size(), 2u);
  EXPECT_DOUBLE_EQ(pf.prob(0), 0.5);
  EXPECT_DOUBLE_EQ(pf.prob(1), 0.5);
  EXPECT_EQ(pf.outcome(0), numeric_label(0.2));
  EXPECT_EQ(pf.outcome(1), numeric_label(0.5));

  // Constant column collapses to a point mass.
  Eigen::MatrixXd c(3, 1);
  c << 0.7, 0.7, 0.7;
  const LossSpec constant =
      LossSpec::table(LossTable({"a", "b", "c"}, {"a0"}, c));
  EXPECT_EQ(pushforward(p, constant, Action{std::size_t{0}}).size(), 1u);
}

TEST(Pushforward, ZeroOneSplitsHitMass) {
  const DiscreteDist p({"a", "b"}, {0.3, 0.7});
  const DiscreteDist pf =
      pushforward(p, LossSpec::zero_one(), Action{std::size_t{0}});
  ASSERT_EQ(pf.size(), 2u);
  EXPECT_DOUBLE_EQ(pf.prob(0), 0.3);  // loss 0 at the hit
  EXPECT_DOUBLE_EQ(pf.prob(1), 0.7);
}

TEST(Semidistance, TableScansAndZeroOne) {
  const DiscreteDist p({"a", "b"}, {0.6, 0.4});
  const DiscreteDist q({"a", "b"}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(*semidistance_al(p, p, LossSpec::zero_one()), 0.0);

  Eigen::MatrixXd single(2, 1);
  single << 0.9, 0.1;
  const LossSpec one_action =
      LossSpec::table(LossTable({"a", "b"}, {"a0"}, single));
  const double gap = std::abs((0.6 - 0.5) * 0.9 + (0.4 - 0.5) * 0.1);
  EXPECT_NEAR(*semidistance_al(p, q, one_action), gap, 1e-15);

  EXPECT_FALSE(semidistance_al(p, q, LossSpec::quadratic()).has_value());
}

// With all 2^|Z| binary columns, the semidistance is exactly d_TV.
TEST(Semidistance, AllBinaryColumnsRecoverTv) {
  CounterRng rng(43);
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 2 + rng.next_u64() % 4;
    const DiscreteDist p = random_dist(rng, n, 0.0);
    const DiscreteDist q = random_dist(rng, n, 0.0);
    const std::size_t cols = std::size_t{1} << n;
    Eigen::MatrixXd v(n, cols);
    std::vector<std::string> al(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      al[c] = "f" + std::to_string(c);
      for (std::size_t z = 0; z < n; ++z) {
        v(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(c)) =
            (c >> z) & 1 ? 1.0 : 0.0;
      }
    }
    const LossSpec spec = LossSpec::table(LossTable(p.outcomes(), al, v));
    EXPECT_NEAR(*semidistance_al(p, q, spec), tv(p, q), 1e-12);
  }
}

// A constant loss makes the semidistance vanish for P != Q: the witness for
// "semidistance" rather than "distance".
TEST(Semidistance, VanishesForConstantLoss) {
  const DiscreteDist p({"a", "b"}, {0.9, 0.1});
  const DiscreteDist q({"a", "b"}, {0.1, 0.9});
  Eigen::MatrixXd v(2, 2);
  v << 0.3, 0.8, 0.3, 0.8;
  const LossSpec spec = LossSpec::table(LossTable({"a", "b"}, {"x", "y"}, v));
  EXPECT_GT(tv(p, q), 0.0);
  EXPECT_DOUBLE_EQ(*semidistance_al(p, q, spec), 0.0);
}

TEST(Pinsker, HoldsOnRandomPairs) {
  CounterRng rng(47);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 2 + rng.next_u64() % 6;
    const DiscreteDist p = random_dist(rng, n, 0.0);
    const DiscreteDist q = random_dist(rng, n, 0.0);
    EXPECT_LE(tv(p, q), std::sqrt(kl(p, q) / 2.0) + 1e-12);
  }
}

// Deterministic maps (here: loss pushforwards) cannot increase statistical
// distance.
TEST(DataProcessing, PushforwardContractsDivergences) {
  CounterRng rng(53);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t nz = 2 + rng.next_u64() % 6;
    const std::size_t na = 1 + rng.next_u64() % 4;
    const DiscreteDist p = random_dist(rng, nz);
    const DiscreteDist q = random_dist(rng, nz);
    Eigen::MatrixXd v(nz, na);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      // Coarse quantization forces merges.
      v(i) = std::round(rng.next_double() * 3.0) / 3.0;
    }
    std::vector<std::string> al(na);
    for (std::size_t a = 0; a < na; ++a) al[a] = "a" + std::to_string(a);
    const LossSpec spec = LossSpec::table(LossTable(p.outcomes(), al, v));
    for (std::size_t a = 0; a < na; ++a) {
      const DiscreteDist pf_p = pushforward(p, spec, Action{a});
      const DiscreteDist pf_q = pushforward(q, spec, Action{a});
      EXPECT_LE(tv(pf_p, pf_q), tv(p, q) + 1e-12);
      EXPECT_LE(kl(pf_p, pf_q), kl(p, q) + 1e-12);
      EXPECT_LE(chi2(pf_p, pf_q), chi2(p, q) + 1e-12);
    }
  }
}

TEST(TransportLp, PlanCsvEmission) {
  const DiscreteDist p({"0", "1", "2"}, {1.0, 0.0, 0.0});
  const DiscreteDist q({"0", "1", "2"}, {0.0, 0.0, 1.0});
  const TransportPlan plan =
      wasserstein1_discrete(p, q, line_metric({0.0, 1.0, 2.0}));
  std::ostringstream os;
  write_transport_plan_csv(os, plan);
  EXPECT_EQ(os.str(), "row,col,mass\n0,2,1\n");
}

// Positive-definiteness: zero distance characterizes equality for every
// divergence except the (A,l)-semidistance.
TEST(Divergences, ZeroIffEqual) {
  CounterRng rng(151);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng.next_u64() % 5;
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = numeric_label(static_cast<double>(i));
    }
    DiscreteDist p(labels, random_dist(rng, n).probs());
    DiscreteDist q(labels, random_dist(rng, n).probs());
    if (tv(p, q) <= 1e-12) continue;  // essentially equal, skip
    EXPECT_GT(tv(p, q), 0.0);
    EXPECT_GT(kl(p, q), 0.0);
    EXPECT_GT(chi2(p, q), 0.0);
    EXPECT_GT(wasserstein1_1d(p, q), 0.0);
    EXPECT_DOUBLE_EQ(tv(p, p), 0.0);
    EXPECT_DOUBLE_EQ(kl(p, p), 0.0);
    EXPECT_DOUBLE_EQ(chi2(p, p), 0.0);
    EXPECT_DOUBLE_EQ(wasserstein1_1d(p, p), 0.0);
  }
}

TEST(MutualInformation, ProductIsZeroNoisyChannelPositive) {
  const DiscreteDist px({"0", "1"}, {0.5, 0.5});
  const DiscreteDist py({"u", "v"}, {0.3, 0.7});
  EXPECT_NEAR(mutual_information(JointDiscrete::product(px, py)), 0.0, 1e-15);

  Eigen::MatrixXd probs(2, 2);
  probs << 0.4, 0.1, 0.1, 0.4;
  const JointDiscrete j({"0", "1"}, {"0", "1"}, probs);
  EXPECT_NEAR(mutual_information(j), 0.19274475702175753, 1e-14);
  EXPECT_NEAR(lautum_information(j), 0.22314355131420974, 1e-14);
}

}  // namespace
}  // namespace gentropy
