#include <algorithm>
#include <cmath>
#include <functional>

#include "gentropy/divergence.hpp"
#include "gentropy/learn.hpp"

namespace gentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// E over the joint of l(Y, psi(X)); psi given per x index. Rows with zero
/// P_X mass are skipped.
double joint_expected_loss(const JointDiscrete& j, const LossSpec& spec,
                           const BayesRule& rule) {
  double acc = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    double row_mass = 0.0;
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      row_mass += j.probs()(static_cast<Eigen::Index>(x),
                            static_cast<Eigen::Index>(y));
    }
    if (row_mass <= 0.0) continue;
    const Action& a = rule.at(x);
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double w = j.probs()(static_cast<Eigen::Index>(x),
                                 static_cast<Eigen::Index>(y));
      if (w == 0.0) continue;
      acc += w * eval_loss_at(spec, j.y_outcomes(), y, a);
    }
  }
  return acc;
}

/// Tight range of l(y, psi(x)) as a function of (x, y) over the support.
Interval rule_loss_range(const JointDiscrete& j, const LossSpec& spec,
                         const BayesRule& rule, const DiscreteDist& px) {
  double lo = kInf, hi = -kInf;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    if (px.prob(x) <= 0.0) continue;
    const Action& a = rule.at(x);
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double l = eval_loss_at(spec, j.y_outcomes(), y, a);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  return {lo, hi};
}

void require_rule_coverage(const DiscreteDist& px, const DiscreteDist& qx,
                           const char* what) {
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px.prob(x) > 0.0 && qx.prob(x) <= 0.0) {
      throw std::invalid_argument(
          std::string(what) + ": Q has no conditional at x index " +
          std::to_string(x) + " where P keeps mass");
    }
  }
}

BoundReport make_report(std::string name, bool applicable, double value,
                        std::vector<std::string> conditions) {
  BoundReport r;
  r.name = name;
  r.citation = std::move(name);
  r.applicable = applicable;
  if (applicable) r.value = value;
  r.conditions = std::move(conditions);
  return r;
}

}  // namespace

std::vector<BoundReport> cond_entropy_diff_bounds(const JointDiscrete& pj,
                                                  const JointDiscrete& qj,
                                                  const LossSpec& spec) {
  if (pj.x_outcomes() != qj.x_outcomes() ||
      pj.y_outcomes() != qj.y_outcomes()) {
    throw std::invalid_argument(
        "cond_entropy_diff_bounds: joints must share supports");
  }
  const DiscreteDist px = pj.marginal_x();
  const DiscreteDist qx = qj.marginal_x();
  require_rule_coverage(px, qx, "cond_entropy_diff_bounds");
  require_rule_coverage(qx, px, "cond_entropy_diff_bounds");

  const auto p_cond = conditional_entropy(pj, spec);
  const auto q_cond = conditional_entropy(qj, spec);

  std::vector<BoundReport> out;

  // Raw expectation differences; upper bounds the signed conditional
  // entropy difference in each direction and may be negative.
  out.push_back(make_report(
      "cond.raw.upper", true,
      joint_expected_loss(pj, spec, q_cond.rule) -
          joint_expected_loss(qj, spec, q_cond.rule),
      {"E_P l(Y, psi_Q(X)) - E_Q l(Y, psi_Q(X))"}));
  out.push_back(make_report(
      "cond.raw.lower", true,
      joint_expected_loss(qj, spec, p_cond.rule) -
          joint_expected_loss(pj, spec, p_cond.rule),
      {"E_Q l(Y, psi_P(X)) - E_P l(Y, psi_P(X))"}));

  // sqrt(D/2) route for losses in [0, 1], with the chain-rule split of the
  // joint divergence reported alongside.
  const bool unit_range =
      spec.is_table() ? (spec.table_data().values.minCoeff() >= 0.0 &&
                         spec.table_data().values.maxCoeff() <= 1.0)
                      : spec.kind() == LossKind::zero_one;
  if (unit_range) {
    const double d_joint = kl(pj.flatten(), qj.flatten());
    double d_x = kl(px, qx);
    double d_cond = 0.0;
    for (std::size_t x = 0; x < pj.x_size() && std::isfinite(d_cond); ++x) {
      if (px.prob(x) <= 0.0) continue;
      d_cond += px.prob(x) *
                kl(pj.conditional_y_given_x(x), qj.conditional_y_given_x(x));
    }
    out.push_back(make_report(
        "cond.kl-chain", true, std::sqrt(0.5 * d_joint),
        {"D(P_X||Q_X) = " + numeric_label(d_x),
         "D(P_{Y|X}||Q_{Y|X}|P_X) = " + numeric_label(d_cond)}));
  } else {
    out.push_back(make_report("cond.kl-chain", false, 0.0,
                              {"loss range exceeds [0, 1]"}));
  }

  // Per-x decomposition when the X marginals agree.
  bool shared_marginal = true;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (std::abs(px.prob(x) - qx.prob(x)) > 1e-12) {
      shared_marginal = false;
      break;
    }
  }
  if (shared_marginal) {
    double up = 0.0, down = 0.0;
    for (std::size_t x = 0; x < pj.x_size(); ++x) {
      if (px.prob(x) <= 0.0) continue;
      const DiscreteDist pc = pj.conditional_y_given_x(x);
      const DiscreteDist qc = qj.conditional_y_given_x(x);
      up += px.prob(x) * (expected_loss(pc, spec, q_cond.rule.at(x)) -
                          expected_loss(qc, spec, q_cond.rule.at(x)));
      down += px.prob(x) * (expected_loss(qc, spec, p_cond.rule.at(x)) -
                            expected_loss(pc, spec, p_cond.rule.at(x)));
    }
    out.push_back(make_report("cond.per-x.upper", true, up,
                              {"shared X marginal"}));
    out.push_back(make_report("cond.per-x.lower", true, down,
                              {"shared X marginal"}));
  } else {
    out.push_back(make_report("cond.per-x.upper", false, 0.0,
                              {"X marginals differ"}));
    out.push_back(make_report("cond.per-x.lower", false, 0.0,
                              {"X marginals differ"}));
  }
  return out;
}

MismatchResult mismatch_excess(const JointDiscrete& pj,
                               const JointDiscrete& qj, const LossSpec& spec) {
  if (pj.x_outcomes() != qj.x_outcomes() ||
      pj.y_outcomes() != qj.y_outcomes()) {
    throw std::invalid_argument("mismatch_excess: joints must share supports");
  }
  const DiscreteDist px = pj.marginal_x();
  const DiscreteDist qx = qj.marginal_x();
  require_rule_coverage(px, qx, "mismatch_excess");

  const auto p_cond = conditional_entropy(pj, spec);
  const auto q_cond = conditional_entropy(qj, spec);

  // psi_Q may be undefined where only P keeps mass; coverage was checked.
  MismatchResult result;
  result.excess =
      joint_expected_loss(pj, spec, q_cond.rule) - p_cond.value;

  // Route 1: B_Q bounds |H(Q|Q) - H(P|P)| via expectation gaps over the
  // joint. The
  // per-rule tight ranges give the TV form; the KL form uses sqrt(2
  // sigma^2 D) with sigma^2 = width^2/4.
  const Interval wq = rule_loss_range(pj, spec, q_cond.rule, px);
  const Interval wp = rule_loss_range(pj, spec, p_cond.rule, px);
  const double width = std::max(wq.width(), wp.width());
  const double d_tv_joint = tv(pj.flatten(), qj.flatten());
  const double d_kl_joint = kl(pj.flatten(), qj.flatten());
  result.b_q_tv = width * d_tv_joint;
  result.b_q_kl = width * std::sqrt(0.5 * d_kl_joint);

  // Route 2: per-x decomposition under P_X; psi_Q stays a Bayes rule for
  // Q_{Y|X} when the marginal is swapped to P_X.
  double b_p = 0.0;
  for (std::size_t x = 0; x < pj.x_size(); ++x) {
    if (px.prob(x) <= 0.0) continue;
    const DiscreteDist pc = pj.conditional_y_given_x(x);
    const DiscreteDist qc = qj.conditional_y_given_x(x);
    const auto width_at = [&](const Action& a) {
      const auto r = loss_range(spec, a, pj.y_outcomes());
      return r ? r->width() : kInf;
    };
    const double w_x = std::max(width_at(q_cond.rule.at(x)),
                                width_at(p_cond.rule.at(x)));
    b_p += px.prob(x) * w_x * tv(pc, qc);
  }
  result.b_p_per_x = b_p;

  result.reports.push_back(
      make_report("mismatch.excess", true, result.excess, {}));
  result.reports.push_back(make_report(
      "mismatch.2bq.tv", true, 2.0 * result.b_q_tv,
      {"width " + numeric_label(width), "joint d_TV " +
       numeric_label(d_tv_joint)}));
  result.reports.push_back(make_report(
      "mismatch.2bq.kl", true, 2.0 * result.b_q_kl,
      {"joint KL " + numeric_label(d_kl_joint)}));
  result.reports.push_back(
      make_report("mismatch.2bp.per-x", true, 2.0 * result.b_p_per_x, {}));
  return result;
}

namespace {

/// Adaptive Simpson quadrature; the integrands here are smooth Gaussian
/// mixtures, so recursion stays shallow.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

MismatchEstimatorResult mismatched_estimator_bound(const DiscreteDist& p_y,
                                                   const DiscreteDist& q_y,
                                                   double alpha,
                                                   double noise_sd) {
  if (!p_y.same_support(q_y)) {
    throw std::invalid_argument(
        "mismatched_estimator_bound: priors must share a support list");
  }
  if (!(noise_sd > 0.0)) {
    throw std::invalid_argument("mismatched_estimator_bound: noise sd <= 0");
  }
  const auto y = p_y.numeric_outcomes();
  const double s2 = noise_sd * noise_sd;

  // Posterior-mean estimator under a prior `w` on the same support.
  const auto estimator = [&](const std::vector<double>& w, double x) {
    double max_e = -kInf;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (w[i] <= 0.0) continue;
      const double r = x - alpha * y[i];
      max_e = std::max(max_e, -r * r / (2.0 * s2));
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (w[i] <= 0.0) continue;
      const double r = x - alpha * y[i];
      const double e = std::exp(-r * r / (2.0 * s2) - max_e);
      num += w[i] * y[i] * e;
      den += w[i] * e;
    }
    return num / den;
  };

  double lo = kInf, hi = -kInf;
  for (double v : y) {
    lo = std::min(lo, alpha * v);
    hi = std::max(hi, alpha * v);
  }
  lo -= 8.0 * noise_sd;
  hi += 8.0 * noise_sd;
  const double norm = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * s2);

  // E_prior[(Y - psi(X))^k]: mixture-component quadrature over x.
  const auto moment = [&](const std::vector<double>& prior,
                          const std::vector<double>& est_prior, int k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (prior[i] <= 0.0) continue;
      const double yi = y[i];
      const auto integrand = [&](double x) {
        const double r = x - alpha * yi;
        const double diff = yi - estimator(est_prior, x);
        double pw = diff * diff;
        if (k == 4) pw *= pw;
        return norm * std::exp(-r * r / (2.0 * s2)) * pw;
      };
      acc += prior[i] * integrate(integrand, lo, hi, 1e-9);
    }
    return acc;
  };

  const auto& p = p_y.probs();
  const auto& q = q_y.probs();
  MismatchEstimatorResult result;
  const double risk_q_under_p = moment(p, q, 2);
  const double bayes_risk_p = moment(p, p, 2);
  result.excess = risk_q_under_p - bayes_risk_p;
  result.chi2_pq = chi2(p_y, q_y);
  result.chi2_qp = chi2(q_y, p_y);
  const double m4_q = moment(q, q, 4);
  const double m4_p = moment(p, p, 4);
  result.bound = std::sqrt(m4_q * result.chi2_pq) +
                 std::sqrt(m4_p * result.chi2_qp);
  return result;
}

}  // namespace gentropy
