#include "gentropy/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace gentropy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::log: return "log";
    case LossKind::quadratic: return "quadratic";
    case LossKind::zero_one: return "zero-one";
    case LossKind::absolute: return "absolute";
    case LossKind::table: return "table";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "log") return LossKind::log;
  if (name == "quadratic") return LossKind::quadratic;
  if (name == "zero-one" || name == "zero_one") return LossKind::zero_one;
  if (name == "absolute") return LossKind::absolute;
  if (name == "table") return LossKind::table;
  throw std::invalid_argument("unknown loss kind '" + name + "'");
}

LossTable::LossTable(std::vector<std::string> outcomes,
                     std::vector<std::string> actions, Eigen::MatrixXd vals)
    : outcome_labels(std::move(outcomes)),
      action_labels(std::move(actions)),
      values(std::move(vals)) {
  if (outcome_labels.empty() || action_labels.empty()) {
    throw std::invalid_argument("LossTable: empty axis");
  }
  if (values.rows() != static_cast<Eigen::Index>(outcome_labels.size()) ||
      values.cols() != static_cast<Eigen::Index>(action_labels.size())) {
    throw std::invalid_argument("LossTable: shape mismatch");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("LossTable: entries must be finite");
  }
}

nlohmann::json LossTable::to_json() const {
  std::vector<std::vector<double>> rows(n_outcomes());
  for (std::size_t i = 0; i < n_outcomes(); ++i) {
    rows[i].resize(n_actions());
    for (std::size_t a = 0; a < n_actions(); ++a) {
      rows[i][a] = values(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(a));
    }
  }
  return nlohmann::json{{"outcomes", outcome_labels},
                        {"actions", action_labels},
                        {"values", rows}};
}

LossTable LossTable::from_json(const nlohmann::json& j) {
  auto outcomes = j.at("outcomes").get<std::vector<std::string>>();
  auto actions = j.at("actions").get<std::vector<std::string>>();
  auto rows = j.at("values").get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(outcomes.size(), actions.size());
  if (rows.size() != outcomes.size()) {
    throw std::invalid_argument("LossTable: row count mismatch");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != actions.size()) {
      throw std::invalid_argument("LossTable: column count mismatch");
    }
    for (std::size_t a = 0; a < rows[i].size(); ++a) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) =
          rows[i][a];
    }
  }
  return LossTable(std::move(outcomes), std::move(actions), std::move(m));
}

std::string describe_action(const Action& a, const LossKind kind) {
  if (std::holds_alternative<std::size_t>(a)) {
    return (kind == LossKind::table ? "column " : "outcome ") +
           std::to_string(std::get<std::size_t>(a));
  }
  if (std::holds_alternative<double>(a)) {
    return numeric_label(std::get<double>(a));
  }
  if (std::holds_alternative<GaussianScalar>(a)) {
    const auto& g = std::get<GaussianScalar>(a);
    return "gaussian(" + numeric_label(g.mean) + "," +
           numeric_label(g.variance) + ")";
  }
  return "dist";
}

LossSpec LossSpec::log_loss() { return LossSpec(LossKind::log); }
LossSpec LossSpec::quadratic() { return LossSpec(LossKind::quadratic); }
LossSpec LossSpec::zero_one() { return LossSpec(LossKind::zero_one); }
LossSpec LossSpec::absolute() { return LossSpec(LossKind::absolute); }

LossSpec LossSpec::table(LossTable t) {
  LossSpec spec(LossKind::table);
  spec.table_ = std::move(t);
  return spec;
}

const LossTable& LossSpec::table_data() const {
  if (!table_) throw std::logic_error("LossSpec: not a table loss");
  return *table_;
}

LossSpec& LossSpec::with_range(Interval r) {
  if (r.hi < r.lo) throw std::invalid_argument("LossSpec: empty range");
  if (table_) {
    if (table_->values.minCoeff() < r.lo ||
        table_->values.maxCoeff() > r.hi) {
      throw std::invalid_argument(
          "LossSpec: table entries fall outside the declared range");
    }
  }
  range_ = r;
  return *this;
}

LossSpec& LossSpec::with_domain(Interval d) {
  if (d.hi < d.lo) throw std::invalid_argument("LossSpec: empty domain");
  domain_ = d;
  return *this;
}

LossSpec& LossSpec::with_lipschitz(double rho) {
  if (!(rho >= 0.0)) {
    throw std::invalid_argument("LossSpec: lipschitz constant must be >= 0");
  }
  lipschitz_ = rho;
  return *this;
}

nlohmann::json LossSpec::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}};
  if (table_) j["table"] = table_->to_json();
  if (range_) j["range"] = {range_->lo, range_->hi};
  if (domain_) j["domain"] = {domain_->lo, domain_->hi};
  if (lipschitz_) j["lipschitz"] = *lipschitz_;
  return j;
}

LossSpec LossSpec::from_json(const nlohmann::json& j) {
  const auto kind = loss_kind_from_string(j.at("kind").get<std::string>());
  LossSpec spec = [&] {
    if (kind == LossKind::table) {
      return LossSpec::table(LossTable::from_json(j.at("table")));
    }
    LossSpec s(kind);
    return s;
  }();
  if (j.contains("range")) {
    spec.with_range({j["range"].at(0).get<double>(),
                     j["range"].at(1).get<double>()});
  }
  if (j.contains("domain")) {
    spec.with_domain({j["domain"].at(0).get<double>(),
                      j["domain"].at(1).get<double>()});
  }
  if (j.contains("lipschitz")) {
    spec.with_lipschitz(j["lipschitz"].get<double>());
  }
  return spec;
}

namespace {

double numeric_or_throw(const std::string& z) {
  auto v = parse_numeric_label(z);
  if (!v) {
    throw std::invalid_argument("loss: outcome '" + z + "' is not numeric");
  }
  return *v;
}

}  // namespace

double eval_loss(const LossSpec& spec, const std::string& z, const Action& a) {
  switch (spec.kind()) {
    case LossKind::log: {
      if (!std::holds_alternative<DiscreteDist>(a)) {
        throw std::invalid_argument(
            "log loss action must be a distribution over Z");
      }
      const auto& q = std::get<DiscreteDist>(a);
      const auto idx = q.index_of(z);
      if (!idx) {
        throw std::invalid_argument("log loss: outcome '" + z +
                                    "' not in the action's support");
      }
      const double p = q.prob(*idx);
      return p > 0.0 ? -std::log(p) : kInf;
    }
    case LossKind::quadratic: {
      const double zv = numeric_or_throw(z);
      const double av = std::get<double>(a);
      return (zv - av) * (zv - av);
    }
    case LossKind::absolute: {
      return std::abs(numeric_or_throw(z) - std::get<double>(a));
    }
    case LossKind::zero_one: {
      if (std::holds_alternative<std::size_t>(a)) {
        throw std::invalid_argument(
            "zero-one eval_loss needs a label-resolved action; use "
            "eval_loss_at");
      }
      throw std::invalid_argument("zero-one loss action must be an outcome");
    }
    case LossKind::table: {
      const auto& t = spec.table_data();
      const auto it = std::find(t.outcome_labels.begin(),
                                t.outcome_labels.end(), z);
      if (it == t.outcome_labels.end()) {
        throw std::invalid_argument("table loss: unknown outcome '" + z + "'");
      }
      const auto zi =
          static_cast<std::size_t>(it - t.outcome_labels.begin());
      return t.values(static_cast<Eigen::Index>(zi),
                      static_cast<Eigen::Index>(std::get<std::size_t>(a)));
    }
  }
  throw std::logic_error("unreachable");
}

double eval_loss_at(const LossSpec& spec,
                    const std::vector<std::string>& support, std::size_t zi,
                    const Action& a) {
  switch (spec.kind()) {
    case LossKind::zero_one:
      return zi == std::get<std::size_t>(a) ? 0.0 : 1.0;
    case LossKind::table: {
      const auto& t = spec.table_data();
      return t.values(static_cast<Eigen::Index>(zi),
                      static_cast<Eigen::Index>(std::get<std::size_t>(a)));
    }
    default:
      return eval_loss(spec, support.at(zi), a);
  }
}

double expected_loss(const DiscreteDist& p, const LossSpec& spec,
                     const Action& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = p.prob(i);
    if (w == 0.0) continue;  // 0 * inf := 0, the log-loss convention
    const double l = eval_loss_at(spec, p.outcomes(), i, a);
    if (std::isinf(l)) return kInf;
    acc += w * l;
  }
  return acc;
}

std::optional<Interval> loss_range(
    const LossSpec& spec, const Action& a,
    const std::optional<std::vector<std::string>>& support) {
  switch (spec.kind()) {
    case LossKind::table: {
      const auto& t = spec.table_data();
      const auto col = std::get<std::size_t>(a);
      const auto c = t.values.col(static_cast<Eigen::Index>(col));
      return Interval{c.minCoeff(), c.maxCoeff()};
    }
    case LossKind::zero_one:
      return Interval{0.0, 1.0};
    case LossKind::log: {
      // Tight range of -log a(z) over the support; unbounded when the
      // action puts zero mass somewhere.
      if (!std::holds_alternative<DiscreteDist>(a)) return std::nullopt;
      const auto& q = std::get<DiscreteDist>(a);
      double pmin = kInf, pmax = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        pmin = std::min(pmin, q.prob(i));
        pmax = std::max(pmax, q.prob(i));
      }
      if (pmin <= 0.0) {
        if (spec.declared_range()) return spec.declared_range();
        return std::nullopt;
      }
      return Interval{-std::log(pmax), -std::log(pmin)};
    }
    case LossKind::quadratic:
    case LossKind::absolute: {
      const double av = std::get<double>(a);
      if (support) {
        double lo = kInf, hi = -kInf;
        for (const auto& label : *support) {
          const double zv = numeric_or_throw(label);
          const double l = spec.kind() == LossKind::quadratic
                               ? (zv - av) * (zv - av)
                               : std::abs(zv - av);
          lo = std::min(lo, l);
          hi = std::max(hi, l);
        }
        return Interval{lo, hi};
      }
      if (spec.declared_domain()) {
        const double w = spec.declared_domain()->width();
        return spec.kind() == LossKind::quadratic ? Interval{0.0, w * w}
                                                  : Interval{0.0, w};
      }
      if (spec.declared_range()) return spec.declared_range();
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double lipschitz_constant(const LossSpec& spec,
                          const std::vector<std::string>& support,
                          const Eigen::MatrixXd& metric, const Action& a) {
  const std::size_t n = support.size();
  double rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double li = eval_loss_at(spec, support, i, a);
    for (std::size_t k = i + 1; k < n; ++k) {
      const double d = metric(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(k));
      if (d <= 0.0) continue;
      const double lk = eval_loss_at(spec, support, k, a);
      rho = std::max(rho, std::abs(li - lk) / d);
    }
  }
  return rho;
}

bool validate_lipschitz(const LossSpec& spec,
                        const std::vector<std::string>& support,
                        const Eigen::MatrixXd& metric, double rho,
                        double tol) {
  std::vector<Action> actions;
  if (spec.is_table()) {
    for (std::size_t a = 0; a < spec.table_data().n_actions(); ++a) {
      actions.emplace_back(a);
    }
  } else if (spec.kind() == LossKind::zero_one) {
    for (std::size_t a = 0; a < support.size(); ++a) actions.emplace_back(a);
  } else {
    throw NotApplicableError(
        "lipschitz validation needs an enumerable action set");
  }
  for (const auto& a : actions) {
    if (lipschitz_constant(spec, support, metric, a) > rho + tol) return false;
  }
  return true;
}

}  // namespace gentropy
