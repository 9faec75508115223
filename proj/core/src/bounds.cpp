#include "gentropy/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "gentropy/entropy.hpp"

namespace gentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundReport inapplicable(std::string name, std::string citation,
                         std::string why) {
  BoundReport r;
  r.name = std::move(name);
  r.applicable = false;
  r.citation = std::move(citation);
  r.conditions.push_back(std::move(why));
  return r;
}

BoundReport applicable(std::string name, std::string citation, double value,
                       std::vector<std::string> conditions = {}) {
  BoundReport r;
  r.name = std::move(name);
  r.applicable = true;
  r.value = value;
  r.citation = std::move(citation);
  r.conditions = std::move(conditions);
  return r;
}

std::string fmt(double v) { return numeric_label(v); }

/// Loss values of l(., a) over a common support; +inf entries possible for
/// the log loss.
std::vector<double> loss_column(const DiscreteDist& support_of,
                                const LossSpec& spec, const Action& a) {
  std::vector<double> l(support_of.size());
  for (std::size_t i = 0; i < support_of.size(); ++i) {
    l[i] = eval_loss_at(spec, support_of.outcomes(), i, a);
  }
  return l;
}

double mean_under(const DiscreteDist& d, const std::vector<double>& l) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.prob(i) == 0.0) continue;
    if (std::isinf(l[i])) return kInf;
    m += d.prob(i) * l[i];
  }
  return m;
}

double variance_under(const DiscreteDist& d, const std::vector<double>& l) {
  const double m = mean_under(d, l);
  if (std::isinf(m)) return kInf;
  double v = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.prob(i) == 0.0) continue;
    v += d.prob(i) * (l[i] - m) * (l[i] - m);
  }
  return v;
}

}  // namespace

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j{{"name", name},
                   {"applicable", applicable},
                   {"conditions", conditions},
                   {"citation", citation}};
  if (applicable && value) {
    if (std::isinf(*value)) {
      j["value"] = *value > 0 ? "inf" : "-inf";
    } else {
      j["value"] = *value;
    }
  }
  return j;
}

BoundReport BoundReport::from_json(const nlohmann::json& j) {
  BoundReport r;
  r.name = j.at("name").get<std::string>();
  r.applicable = j.at("applicable").get<bool>();
  r.conditions = j.at("conditions").get<std::vector<std::string>>();
  r.citation = j.at("citation").get<std::string>();
  if (j.contains("value")) {
    if (j["value"].is_string()) {
      r.value = j["value"].get<std::string>() == "-inf" ? -kInf : kInf;
    } else {
      r.value = j["value"].get<double>();
    }
  }
  return r;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

BoundPair tv_bound(const DiscreteDist& p, const DiscreteDist& q,
                   const LossSpec& spec) {
  const char* citation = "tv.range";
  const double d = tv(p, q);
  const auto direction = [&](const char* name,
                             const DiscreteDist& opt_under) -> BoundReport {
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      const auto range = loss_range(spec, a, opt_under.outcomes());
      if (!range) {
        return inapplicable(name, citation,
                            "no finite loss range at the optimal action");
      }
      return applicable(name, citation, range->width() * d,
                        {"loss range [" + fmt(range->lo) + "," +
                         fmt(range->hi) + "] at the optimal action"});
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  return {direction("tv.range.upper", q), direction("tv.range.lower", p)};
}

BoundPair kl_subgaussian_bound(const DiscreteDist& p, const DiscreteDist& q,
                               const LossSpec& spec,
                               std::optional<double> sigma2_q,
                               std::optional<double> sigma2_p) {
  const char* citation = "kl.subgaussian";
  const double d = kl(p, q);
  const auto direction = [&](const char* name, const DiscreteDist& opt_under,
                             std::optional<double> sigma2) -> BoundReport {
    std::vector<std::string> conditions;
    if (!sigma2) {
      // Bounded losses are (beta - alpha)^2/4-subgaussian under any law.
      try {
        const Action a = generalized_entropy(opt_under, spec).optimal_action;
        const auto range = loss_range(spec, a, opt_under.outcomes());
        if (range) {
          sigma2 = range->width() * range->width() / 4.0;
          conditions.push_back("sigma2 = " + fmt(*sigma2) +
                               " derived from the loss range [" +
                               fmt(range->lo) + "," + fmt(range->hi) + "]");
        }
      } catch (const NotApplicableError&) {
        // fall through to the inapplicable report
      }
    } else {
      conditions.push_back("sigma2 = " + fmt(*sigma2) + " supplied");
    }
    if (!sigma2) {
      return inapplicable(name, citation,
                          "no subgaussian constant supplied or derivable");
    }
    return applicable(name, citation, std::sqrt(2.0 * *sigma2 * d),
                      std::move(conditions));
  };
  return {direction("kl.subgaussian.upper", q, sigma2_q),
          direction("kl.subgaussian.lower", p, sigma2_p)};
}

namespace {

/// Exact centered CGF of the loss at an optimal action, checked against an
/// envelope on the envelope's lambda grid. Returns the violating lambda if
/// any.
std::optional<double> cgf_envelope_violation(const DiscreteDist& q,
                                             const std::vector<double>& losses,
                                             const CgfEnvelope& env,
                                             double sign) {
  const double mean = mean_under(q, losses);
  if (std::isinf(mean)) return 0.0;
  const double hi = std::isfinite(env.b) ? env.b * (1.0 - 1e-9) : 1e6;
  const int n = std::max(env.grid_points, 8);
  const double lo = hi * 1e-12;
  const double step = std::log(hi / lo) / (n - 1);
  for (int g = 0; g < n; ++g) {
    const double lambda = lo * std::exp(step * g);
    // log E_Q[e^{sign lambda (L - E L)}], max-shifted.
    double max_exp = -kInf;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q.prob(i) == 0.0) continue;
      max_exp = std::max(max_exp, sign * lambda * (losses[i] - mean));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q.prob(i) == 0.0) continue;
      sum += q.prob(i) * std::exp(sign * lambda * (losses[i] - mean) - max_exp);
    }
    const double cgf = max_exp + std::log(sum);
    if (cgf > env.phi(lambda) + 1e-10) return lambda;
  }
  return std::nullopt;
}

}  // namespace

BoundPair kl_general_bound(const DiscreteDist& p, const DiscreteDist& q,
                           const LossSpec& spec, const CgfEnvelope& env_q,
                           const CgfEnvelope& env_p, bool trusted) {
  const char* citation = "kl.cgf-inverse";
  const double d = kl(p, q);
  const auto direction = [&](const char* name, const DiscreteDist& opt_under,
                             const CgfEnvelope& env,
                             double sign) -> BoundReport {
    std::vector<std::string> conditions;
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      if (trusted) {
        conditions.push_back("envelope supplied analytically; not re-checked");
      } else {
        const auto losses = loss_column(q, spec, a);
        const auto violation = cgf_envelope_violation(q, losses, env, sign);
        if (violation) {
          return inapplicable(name, citation,
                              "CGF condition fails at lambda = " +
                                  fmt(*violation));
        }
        conditions.push_back("CGF condition verified on the lambda grid");
      }
      return applicable(name, citation, kl_bound_from_cgf(env, d),
                        std::move(conditions));
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  return {direction("kl.cgf.upper", q, env_q, +1.0),
          direction("kl.cgf.lower", p, env_p, -1.0)};
}

BoundReport gaussian_variance_kl_bound(const GaussianScalar& q,
                                       double kl_value) {
  const char* citation = "kl.gaussian-variance";
  if (kl_value < 0.0) {
    return inapplicable("kl.gaussian-variance", citation,
                        "KL divergence must be nonnegative");
  }
  const double s2 = q.variance;
  return applicable("kl.gaussian-variance", citation,
                    2.0 * s2 * (std::sqrt(kl_value) + kl_value),
                    {"Q gaussian with variance " + fmt(s2)});
}

BoundPair renyi_condition_bound(const DiscreteDist& p, const DiscreteDist& q,
                                double lambda_max, int grid_points) {
  const char* citation = "kl.renyi-lipschitz";
  const double d = kl(p, q);
  // sigma2 fitted as the smallest grid-feasible constant; an artifact
  // construction, the constants are existential in the theory. The Renyi
  // gap is evaluated through its centered-CGF identity
  //   lambda (R_{1-lambda}(Q) - R_1(Q)) = log E_Q e^{lambda (L - E L)},
  // which is exact where the plain difference of Renyi values cancels
  // catastrophically (uniform Q).
  const auto fit = [&](const char* name, double sign,
                       const std::vector<double>& losses) -> BoundReport {
    double mean = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q.prob(i) == 0.0) continue;
      if (std::isinf(losses[i])) {
        return inapplicable(name, citation,
                            "Renyi gap infinite (support violation)");
      }
      mean += q.prob(i) * losses[i];
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) mass += q.prob(i);
    double sigma2 = 0.0;
    const double lo = 1e-6;
    for (int g = 0; g < grid_points; ++g) {
      const double lambda =
          lo * std::exp(std::log(lambda_max / lo) * g / (grid_points - 1));
      double max_exp = -kInf;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q.prob(i) == 0.0) continue;
        max_exp = std::max(max_exp, sign * lambda * (losses[i] - mean));
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q.prob(i) == 0.0) continue;
        sum += q.prob(i) *
               std::exp(sign * lambda * (losses[i] - mean) - max_exp);
      }
      // log(mass) cancels the rounding of the probability total, which the
      // 1/lambda^2 amplification would otherwise inflate.
      const double cgf = max_exp + std::log(sum) - std::log(mass);
      sigma2 = std::max(sigma2, 2.0 * cgf / (lambda * lambda));
    }
    std::vector<std::string> conditions = {
        "fitted sigma2 = " + fmt(sigma2) + " on the lambda grid (0, " +
        fmt(lambda_max) + "]"};
    if (sigma2 < 1e-8) {
      sigma2 = 0.0;
      conditions.push_back("sigma2 below the 1e-8 noise floor, clamped to 0");
    }
    return applicable(name, citation, std::sqrt(2.0 * sigma2 * d),
                      std::move(conditions));
  };
  std::vector<double> neg_log_q(q.size()), neg_log_p(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    neg_log_q[i] = q.prob(i) > 0.0 ? -std::log(q.prob(i)) : kInf;
    neg_log_p[i] = p.prob(i) > 0.0 ? -std::log(p.prob(i)) : kInf;
  }
  return {fit("kl.renyi.upper", +1.0, neg_log_q),
          fit("kl.renyi.lower", -1.0, neg_log_p)};
}

BoundPair chi2_bound(const DiscreteDist& p, const DiscreteDist& q,
                     const LossSpec& spec) {
  const char* citation = "chi2.hcr";
  const double c2 = chi2(p, q);
  const auto direction = [&](const char* name,
                             const DiscreteDist& opt_under) -> BoundReport {
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      const auto losses = loss_column(q, spec, a);
      const double var = variance_under(q, losses);
      if (std::isinf(var)) {
        return inapplicable(name, citation,
                            "loss variance under Q is infinite");
      }
      std::vector<std::string> conditions = {
          (spec.kind() == LossKind::log
               ? std::string(&opt_under == &q ? "varentropy"
                                              : "cross varentropy") +
                     " = " + fmt(var)
               : "Var_Q[loss at optimal action] = " + fmt(var))};
      return applicable(name, citation, std::sqrt(var * c2),
                        std::move(conditions));
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  return {direction("chi2.hcr.upper", q), direction("chi2.hcr.lower", p)};
}

BoundPair pushforward_bounds(const DiscreteDist& p, const DiscreteDist& q,
                             const LossSpec& spec, DivergenceKind which) {
  const std::string tag = which == DivergenceKind::tv    ? "tv"
                          : which == DivergenceKind::kl  ? "kl"
                                                         : "chi2";
  const std::string citation = "pushforward." + tag;
  const auto direction = [&](const std::string& name,
                             const DiscreteDist& opt_under) -> BoundReport {
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      const DiscreteDist pf_p = pushforward(p, spec, a);
      const DiscreteDist pf_q = pushforward(q, spec, a);
      const auto losses = loss_column(q, spec, a);
      switch (which) {
        case DivergenceKind::tv: {
          const auto range = loss_range(spec, a, opt_under.outcomes());
          if (!range) {
            return inapplicable(name, citation,
                                "no finite loss range at the optimal action");
          }
          return applicable(name, citation,
                            range->width() * tv(pf_p, pf_q));
        }
        case DivergenceKind::kl: {
          const auto range = loss_range(spec, a, opt_under.outcomes());
          if (!range) {
            return inapplicable(name, citation,
                                "no finite loss range at the optimal action");
          }
          const double sigma2 = range->width() * range->width() / 4.0;
          return applicable(name, citation,
                            std::sqrt(2.0 * sigma2 * kl(pf_p, pf_q)));
        }
        case DivergenceKind::chi2: {
          const double var = variance_under(q, losses);
          if (std::isinf(var)) {
            return inapplicable(name, citation,
                                "loss variance under Q is infinite");
          }
          return applicable(name, citation,
                            std::sqrt(var * chi2(pf_p, pf_q)));
        }
      }
      throw std::logic_error("unreachable");
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  return {direction("pushforward." + tag + ".upper", q),
          direction("pushforward." + tag + ".lower", p)};
}

BoundPair wasserstein_lipschitz_bound(const DiscreteDist& p,
                                      const DiscreteDist& q,
                                      const LossSpec& spec,
                                      const Eigen::MatrixXd& metric) {
  const char* citation = "wasserstein.lipschitz";
  const auto direction = [&](const char* name, const DiscreteDist& opt_under,
                             double cost) -> BoundReport {
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      double rho;
      std::vector<std::string> conditions;
      if (spec.declared_lipschitz()) {
        rho = *spec.declared_lipschitz();
        const double measured =
            lipschitz_constant(spec, p.outcomes(), metric, a);
        if (measured > rho + 1e-12) {
          return inapplicable(
              name, citation,
              "declared Lipschitz constant " + fmt(rho) +
                  " violated (measured " + fmt(measured) + ")");
        }
        conditions.push_back("declared rho = " + fmt(rho) + " validated");
      } else {
        rho = lipschitz_constant(spec, p.outcomes(), metric, a);
        conditions.push_back("per-action rho = " + fmt(rho) + " measured");
      }
      return applicable(name, citation, rho * cost, std::move(conditions));
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  try {
    const double cost = wasserstein1_discrete(p, q, metric).cost;
    return {direction("wasserstein.lipschitz.upper", q, cost),
            direction("wasserstein.lipschitz.lower", p, cost)};
  } catch (const std::invalid_argument& e) {
    return {inapplicable("wasserstein.lipschitz.upper", citation, e.what()),
            inapplicable("wasserstein.lipschitz.lower", citation, e.what())};
  }
}

BoundPair wasserstein_loss_pushforward_bound(const DiscreteDist& p,
                                             const DiscreteDist& q,
                                             const LossSpec& spec) {
  const char* citation = "wasserstein.loss-pushforward";
  const auto direction = [&](const char* name,
                             const DiscreteDist& opt_under) -> BoundReport {
    try {
      const Action a = generalized_entropy(opt_under, spec).optimal_action;
      const DiscreteDist pf_p = pushforward(p, spec, a);
      const DiscreteDist pf_q = pushforward(q, spec, a);
      return applicable(name, citation, wasserstein1_1d(pf_p, pf_q),
                        {"identity on loss values is 1-Lipschitz"});
    } catch (const NotApplicableError& e) {
      return inapplicable(name, citation, e.what());
    }
  };
  return {direction("wasserstein.loss-pushforward.upper", q),
          direction("wasserstein.loss-pushforward.lower", p)};
}

BoundReport semidistance_bound(const DiscreteDist& p, const DiscreteDist& q,
                               const LossSpec& spec) {
  const char* citation = "semidistance.al";
  const auto d = semidistance_al(p, q, spec);
  if (!d) {
    return inapplicable("semidistance.al", citation,
                        "action set is not enumerable for this loss");
  }
  return applicable("semidistance.al", citation, *d);
}

std::vector<BoundReport> baseline_bounds(const DiscreteDist& p,
                                         const DiscreteDist& q,
                                         const BaselineExtras& extras) {
  std::vector<BoundReport> out;
  const double t = tv(p, q);
  const double n = static_cast<double>(p.size());

  // Classic TV bound on the Shannon entropy difference, valid for small TV.
  if (t <= 0.25) {
    const double value = t == 0.0 ? 0.0 : 2.0 * t * std::log(n / (2.0 * t));
    out.push_back(applicable("baseline.csiszar-korner",
                             "baseline.csiszar-korner", value,
                             {"d_TV = " + fmt(t) + " <= 1/4"}));
  } else {
    out.push_back(inapplicable("baseline.csiszar-korner",
                               "baseline.csiszar-korner",
                               "requires d_TV <= 1/4 (got " + fmt(t) + ")"));
  }

  // Optimal-coupling bound; |Z| = 1 forces P = Q and a zero bound.
  const double coupling =
      p.size() <= 1 ? 0.0 : t * std::log(n - 1.0) + binary_entropy(t);
  out.push_back(applicable("baseline.coupling", "baseline.coupling",
                           coupling));

  const bool numeric =
      p.has_numeric_outcomes() && q.has_numeric_outcomes();
  if (numeric) {
    const auto moment2 = [](const DiscreteDist& d) {
      const auto z = d.numeric_outcomes();
      double m = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        m += d.prob(i) * z[i] * z[i];
      }
      return m;
    };
    const double w2 = wasserstein2_1d(p, q);
    const double root_p = std::sqrt(moment2(p));
    const double root_q = std::sqrt(moment2(q));

    if (extras.c1 && extras.c2) {
      out.push_back(applicable(
          "baseline.regular-density", "baseline.regular-density",
          (*extras.c1 / 2.0 * (root_p + root_q) + *extras.c2) * w2,
          {"(c1, c2) = (" + fmt(*extras.c1) + ", " + fmt(*extras.c2) +
           ") supplied by caller"}));
    } else {
      out.push_back(inapplicable(
          "baseline.regular-density", "baseline.regular-density",
          "regularity constants (c1, c2) not supplied"));
    }
    out.push_back(applicable("baseline.variance-w2", "baseline.variance-w2",
                             2.0 * (root_p + root_q) * w2));
  } else {
    out.push_back(inapplicable("baseline.regular-density",
                               "baseline.regular-density",
                               "outcomes are not numeric"));
    out.push_back(inapplicable("baseline.variance-w2", "baseline.variance-w2",
                               "outcomes are not numeric"));
  }
  return out;
}

std::vector<Figure1Row> figure1_grid(int density) {
  if (density < 9) {
    throw std::invalid_argument("figure1_grid: density must be at least 9");
  }
  std::vector<Figure1Row> rows;
  rows.reserve(static_cast<std::size_t>(density) *
               static_cast<std::size_t>(density));
  for (int i = 1; i <= density; ++i) {
    for (int k = 1; k <= density; ++k) {
      Figure1Row row;
      row.p = static_cast<double>(i) / (density + 1);
      row.q = static_cast<double>(k) / (density + 1);
      const double d = std::abs(row.p - row.q);  // two-point TV
      const double p_bar =
          std::max(row.p, 1.0 - row.p) / std::min(row.p, 1.0 - row.p);
      const double q_bar =
          std::max(row.q, 1.0 - row.q) / std::min(row.q, 1.0 - row.q);
      row.bound_new = std::log(std::max(p_bar, q_bar)) * d;
      row.bound_zhang = d * std::log(1.0) + binary_entropy(d);
      row.new_tighter = i != k && row.bound_new < row.bound_zhang;
      rows.push_back(row);
    }
  }
  // max(p_bar, q_bar) and d_TV are symmetric under swapping (p, q), so the
  // flag map must be too.
  for (int i = 0; i < density; ++i) {
    for (int k = 0; k < density; ++k) {
      const auto at = [&](int a, int b) {
        return rows[static_cast<std::size_t>(a) *
                        static_cast<std::size_t>(density) +
                    static_cast<std::size_t>(b)]
            .new_tighter;
      };
      if (at(i, k) != at(k, i)) {
        throw std::logic_error("figure1_grid: symmetry check failed");
      }
    }
  }
  return rows;
}

std::vector<BoundReport> mi_upper_bounds(const JointDiscrete& j) {
  const DiscreteDist px = j.marginal_x();
  const DiscreteDist pz = j.marginal_y();

  // gamma(x) = log(max_z / min_z) of the conditional; all three bounds
  // need every conditional entry strictly positive.
  std::vector<double> gamma(j.x_size(), 0.0);
  std::optional<std::string> zero_location;
  for (std::size_t x = 0; x < j.x_size() && !zero_location; ++x) {
    if (px.prob(x) <= 0.0) continue;
    const DiscreteDist cond = j.conditional_y_given_x(x);
    double lo = kInf, hi = 0.0;
    for (std::size_t z = 0; z < cond.size(); ++z) {
      if (cond.prob(z) <= 0.0) {
        zero_location = "P_{Z|X=" + j.x_outcomes()[x] + "}(" +
                        j.y_outcomes()[z] + ") = 0";
        break;
      }
      lo = std::min(lo, cond.prob(z));
      hi = std::max(hi, cond.prob(z));
    }
    gamma[x] = std::log(hi / lo);
  }

  std::vector<BoundReport> out;
  if (zero_location) {
    for (const char* name : {"mi.lautum", "mi.gamma2", "mi.tv-information"}) {
      out.push_back(inapplicable(name, name, *zero_location));
    }
    return out;
  }

  double e_gamma2 = 0.0;
  double sup_gamma = 0.0;
  double tv_information = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    if (px.prob(x) <= 0.0) continue;
    e_gamma2 += px.prob(x) * gamma[x] * gamma[x];
    sup_gamma = std::max(sup_gamma, gamma[x]);
    tv_information += px.prob(x) * tv(j.conditional_y_given_x(x), pz);
  }
  const double lautum = lautum_information(j);

  out.push_back(applicable("mi.lautum", "mi.lautum",
                           std::sqrt(0.5 * e_gamma2 * lautum),
                           {"L(X;Z) = " + fmt(lautum)}));
  out.push_back(applicable("mi.gamma2", "mi.gamma2", 0.5 * e_gamma2));
  out.push_back(applicable("mi.tv-information", "mi.tv-information",
                           sup_gamma * tv_information,
                           {"TV information = " + fmt(tv_information)}));
  return out;
}

}  // namespace gentropy
