#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gentropy/dist.hpp"

namespace gentropy {

/// Raised when an operation is well-posed but outside the conditions an
/// evaluator can certify (unbounded loss without a declared range, table
/// loss on a continuous distribution, ...). Bound evaluators convert it
/// into applicable=false reports.
class NotApplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LossKind { log, quadratic, zero_one, absolute, table };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Explicit |Z| x |A| loss matrix with labeled rows (outcomes) and columns
/// (actions). Entries must be finite.
struct LossTable {
  std::vector<std::string> outcome_labels;
  std::vector<std::string> action_labels;
  Eigen::MatrixXd values;

  LossTable(std::vector<std::string> outcomes, std::vector<std::string> actions,
            Eigen::MatrixXd values);

  std::size_t n_outcomes() const { return outcome_labels.size(); }
  std::size_t n_actions() const { return action_labels.size(); }

  nlohmann::json to_json() const;
  static LossTable from_json(const nlohmann::json& j);
};

/// An action, interpreted according to the loss kind: a table column or
/// outcome index, a real (quadratic/absolute), or a predictive distribution
/// (log loss).
using Action = std::variant<std::size_t, double, DiscreteDist, GaussianScalar>;

std::string describe_action(const Action& a, const LossKind kind);

/// A loss function l(z, a) as a canonical kind or an explicit table, plus
/// the metadata the bound evaluators need (declared loss range, declared
/// numeric outcome domain, Lipschitz constant).
class LossSpec {
 public:
  static LossSpec log_loss();
  static LossSpec quadratic();
  static LossSpec zero_one();
  static LossSpec absolute();
  static LossSpec table(LossTable t);

  LossKind kind() const { return kind_; }
  const LossTable& table_data() const;
  bool is_table() const { return kind_ == LossKind::table; }

  LossSpec& with_range(Interval r);
  LossSpec& with_domain(Interval d);  // numeric outcome domain Z in [lo, hi]
  LossSpec& with_lipschitz(double rho);

  const std::optional<Interval>& declared_range() const { return range_; }
  const std::optional<Interval>& declared_domain() const { return domain_; }
  const std::optional<double>& declared_lipschitz() const { return lipschitz_; }

  nlohmann::json to_json() const;
  static LossSpec from_json(const nlohmann::json& j);

 private:
  explicit LossSpec(LossKind kind) : kind_(kind) {}

  LossKind kind_;
  std::optional<LossTable> table_;
  std::optional<Interval> range_;
  std::optional<Interval> domain_;
  std::optional<double> lipschitz_;
};

/// l(z, a). Log loss at a zero-probability outcome returns +infinity (the
/// sentinel propagates through expectations rather than erroring).
double eval_loss(const LossSpec& spec, const std::string& z, const Action& a);

/// Loss of the i-th outcome of `support` under `spec`; index fast path.
double eval_loss_at(const LossSpec& spec,
                    const std::vector<std::string>& support, std::size_t zi,
                    const Action& a);

/// E_P[l(Z, a)]. Zero-probability outcomes contribute nothing even when
/// their loss is infinite; +infinity propagates otherwise.
double expected_loss(const DiscreteDist& p, const LossSpec& spec,
                     const Action& a);

/// Tight per-action loss range over a finite support, or the range implied
/// by a declared domain/range; nullopt when no finite range is certifiable.
std::optional<Interval> loss_range(
    const LossSpec& spec, const Action& a,
    const std::optional<std::vector<std::string>>& support = std::nullopt);

/// Smallest rho with |l(z,a) - l(z',a)| <= rho d(z,z') over all pairs of a
/// finite support; exhaustive scan.
double lipschitz_constant(const LossSpec& spec,
                          const std::vector<std::string>& support,
                          const Eigen::MatrixXd& metric, const Action& a);

/// Exhaustive check of a declared constant against every action of a table
/// loss (or the canonical action set of zero-one).
bool validate_lipschitz(const LossSpec& spec,
                        const std::vector<std::string>& support,
                        const Eigen::MatrixXd& metric, double rho,
                        double tol = 1e-12);

}  // namespace gentropy
