#include "gentropy/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "gentropy/rng.hpp"

namespace gentropy {

namespace {

void validate_probs(std::vector<double>& probs, std::size_t expected_size,
                    const char* what) {
  if (probs.size() != expected_size) {
    throw std::invalid_argument(std::string(what) +
                                ": outcome/probability length mismatch");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument(std::string(what) +
                                  ": negative probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                std::to_string(sum) + ", not 1");
  }
  for (double& p : probs) p /= sum;
}

void require_distinct(const std::vector<std::string>& labels,
                      const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument(std::string(what) + ": duplicate outcome '" +
                                  l + "'");
    }
  }
}

}  // namespace

std::optional<double> parse_numeric_label(std::string_view label) {
  double value = 0.0;
  const char* begin = label.data();
  const char* end = begin + label.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string numeric_label(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

DiscreteDist::DiscreteDist(std::vector<std::string> outcomes,
                           std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (outcomes_.empty()) {
    throw std::invalid_argument("DiscreteDist: empty support");
  }
  require_distinct(outcomes_, "DiscreteDist");
  validate_probs(probs_, outcomes_.size(), "DiscreteDist");
}

std::optional<std::size_t> DiscreteDist::index_of(
    std::string_view label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == label) return i;
  }
  return std::nullopt;
}

bool DiscreteDist::has_numeric_outcomes() const {
  return std::all_of(outcomes_.begin(), outcomes_.end(), [](const auto& l) {
    return parse_numeric_label(l).has_value();
  });
}

std::vector<double> DiscreteDist::numeric_outcomes() const {
  std::vector<double> values;
  values.reserve(outcomes_.size());
  for (const auto& l : outcomes_) {
    auto v = parse_numeric_label(l);
    if (!v) {
      throw std::invalid_argument("DiscreteDist: outcome '" + l +
                                  "' is not numeric");
    }
    values.push_back(*v);
  }
  return values;
}

double DiscreteDist::mean() const {
  const auto z = numeric_outcomes();
  double m = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) m += probs_[i] * z[i];
  return m;
}

double DiscreteDist::variance() const {
  const auto z = numeric_outcomes();
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    v += probs_[i] * (z[i] - m) * (z[i] - m);
  }
  return v;
}

DiscreteDist DiscreteDist::point_mass(std::string outcome) {
  return DiscreteDist({std::move(outcome)}, {1.0});
}

DiscreteDist DiscreteDist::uniform(std::vector<std::string> outcomes) {
  const std::size_t k = outcomes.size();
  return DiscreteDist(std::move(outcomes),
                      std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

DiscreteDist DiscreteDist::bernoulli(double p) {
  return DiscreteDist({"0", "1"}, {1.0 - p, p});
}

nlohmann::json DiscreteDist::to_json() const {
  return nlohmann::json{{"outcomes", outcomes_}, {"probs", probs_}};
}

DiscreteDist DiscreteDist::from_json(const nlohmann::json& j) {
  return DiscreteDist(j.at("outcomes").get<std::vector<std::string>>(),
                      j.at("probs").get<std::vector<double>>());
}

GaussianScalar::GaussianScalar(double mean_, double variance_)
    : mean(mean_), variance(variance_) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("GaussianScalar: variance must be positive");
  }
}

JointDiscrete::JointDiscrete(std::vector<std::string> x_outcomes,
                             std::vector<std::string> y_outcomes,
                             Eigen::MatrixXd probs)
    : x_outcomes_(std::move(x_outcomes)),
      y_outcomes_(std::move(y_outcomes)),
      probs_(std::move(probs)) {
  if (x_outcomes_.empty() || y_outcomes_.empty()) {
    throw std::invalid_argument("JointDiscrete: empty support");
  }
  require_distinct(x_outcomes_, "JointDiscrete");
  require_distinct(y_outcomes_, "JointDiscrete");
  if (probs_.rows() != static_cast<Eigen::Index>(x_outcomes_.size()) ||
      probs_.cols() != static_cast<Eigen::Index>(y_outcomes_.size())) {
    throw std::invalid_argument("JointDiscrete: matrix shape mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs_.rows(); ++i) {
    for (Eigen::Index k = 0; k < probs_.cols(); ++k) {
      if (!(probs_(i, k) >= 0.0)) {
        throw std::invalid_argument("JointDiscrete: negative probability");
      }
      sum += probs_(i, k);
    }
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw std::invalid_argument("JointDiscrete: probabilities sum to " +
                                std::to_string(sum) + ", not 1");
  }
  probs_ /= sum;
}

DiscreteDist JointDiscrete::marginal_x() const {
  Eigen::VectorXd row_sums = probs_.rowwise().sum();
  return DiscreteDist(x_outcomes_,
                      {row_sums.data(), row_sums.data() + row_sums.size()});
}

DiscreteDist JointDiscrete::marginal_y() const {
  Eigen::VectorXd col_sums = probs_.colwise().sum();
  return DiscreteDist(y_outcomes_,
                      {col_sums.data(), col_sums.data() + col_sums.size()});
}

DiscreteDist JointDiscrete::conditional_y_given_x(std::size_t xi) const {
  const double mass = probs_.row(static_cast<Eigen::Index>(xi)).sum();
  if (mass <= 0.0) {
    throw std::domain_error("JointDiscrete: conditional undefined at '" +
                            x_outcomes_.at(xi) + "' (zero marginal mass)");
  }
  std::vector<double> row(y_outcomes_.size());
  for (std::size_t k = 0; k < y_outcomes_.size(); ++k) {
    row[k] = probs_(static_cast<Eigen::Index>(xi),
                    static_cast<Eigen::Index>(k)) /
             mass;
  }
  return DiscreteDist(y_outcomes_, std::move(row));
}

JointDiscrete JointDiscrete::product(const DiscreteDist& px,
                                     const DiscreteDist& py) {
  Eigen::MatrixXd m(px.size(), py.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t k = 0; k < py.size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          px.prob(i) * py.prob(k);
    }
  }
  return JointDiscrete(px.outcomes(), py.outcomes(), std::move(m));
}

DiscreteDist JointDiscrete::flatten() const {
  std::vector<std::string> labels;
  std::vector<double> probs;
  labels.reserve(x_size() * y_size());
  probs.reserve(x_size() * y_size());
  for (std::size_t i = 0; i < x_size(); ++i) {
    for (std::size_t k = 0; k < y_size(); ++k) {
      labels.push_back(x_outcomes_[i] + "|" + y_outcomes_[k]);
      probs.push_back(probs_(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(k)));
    }
  }
  return DiscreteDist(std::move(labels), std::move(probs));
}

JointDiscrete JointDiscrete::unflatten(const DiscreteDist& flat,
                                       std::vector<std::string> x_outcomes,
                                       std::vector<std::string> y_outcomes) {
  const std::size_t nx = x_outcomes.size();
  const std::size_t ny = y_outcomes.size();
  if (flat.size() != nx * ny) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  Eigen::MatrixXd m(nx, ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t k = 0; k < ny; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          flat.prob(i * ny + k);
    }
  }
  return JointDiscrete(std::move(x_outcomes), std::move(y_outcomes),
                       std::move(m));
}

nlohmann::json JointDiscrete::to_json() const {
  std::vector<std::vector<double>> rows(x_size());
  for (std::size_t i = 0; i < x_size(); ++i) {
    rows[i].resize(y_size());
    for (std::size_t k = 0; k < y_size(); ++k) {
      rows[i][k] = probs_(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(k));
    }
  }
  return nlohmann::json{
      {"x", x_outcomes_}, {"y", y_outcomes_}, {"probs", rows}};
}

JointDiscrete JointDiscrete::from_json(const nlohmann::json& j) {
  auto x = j.at("x").get<std::vector<std::string>>();
  auto y = j.at("y").get<std::vector<std::string>>();
  auto rows = j.at("probs").get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(x.size(), y.size());
  if (rows.size() != x.size()) {
    throw std::invalid_argument("JointDiscrete: row count mismatch");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != y.size()) {
      throw std::invalid_argument("JointDiscrete: column count mismatch");
    }
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rows[i][k];
    }
  }
  return JointDiscrete(std::move(x), std::move(y), std::move(m));
}

Marginals marginals(const JointDiscrete& j) {
  Marginals out{j.marginal_x(), j.marginal_y(), {}};
  out.y_given_x.resize(j.x_size());
  for (std::size_t i = 0; i < j.x_size(); ++i) {
    if (out.x.prob(i) > 0.0) {
      out.y_given_x[i] = j.conditional_y_given_x(i);
    }
  }
  return out;
}

DiscreteDist empirical(const std::vector<std::string>& samples,
                       const std::vector<std::string>& support) {
  if (support.empty()) {
    throw std::invalid_argument("empirical: empty support");
  }
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) index[support[i]] = i;
  std::vector<double> counts(support.size(), 0.0);
  for (const auto& s : samples) {
    auto it = index.find(s);
    if (it == index.end()) {
      throw std::invalid_argument("empirical: sample '" + s +
                                  "' is outside the declared support");
    }
    counts[it->second] += 1.0;
  }
  if (samples.empty()) {
    throw std::invalid_argument("empirical: no samples");
  }
  const double n = static_cast<double>(samples.size());
  for (double& c : counts) c /= n;
  return DiscreteDist(support, std::move(counts));
}

std::vector<double> empirical_from_indices(const std::vector<std::size_t>& idx,
                                           std::size_t support_size) {
  std::vector<double> probs(support_size, 0.0);
  for (std::size_t i : idx) probs.at(i) += 1.0;
  const double n = static_cast<double>(idx.size());
  if (n > 0.0) {
    for (double& p : probs) p /= n;
  }
  return probs;
}

std::vector<std::size_t> sample_indices(const DiscreteDist& dist,
                                        std::size_t n, std::uint64_t seed,
                                        std::uint64_t stream) {
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.prob(i);
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  CounterRng rng(seed, stream);
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.next_double();
    out[k] = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (out[k] >= dist.size()) out[k] = dist.size() - 1;
  }
  return out;
}

std::vector<std::string> sample(const DiscreteDist& dist, std::size_t n,
                                std::uint64_t seed, std::uint64_t stream) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i : sample_indices(dist, n, seed, stream)) {
    out.push_back(dist.outcome(i));
  }
  return out;
}

std::vector<double> sample(const GaussianScalar& dist, std::size_t n,
                           std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  std::vector<double> out(n);
  const double sd = std::sqrt(dist.variance);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = dist.mean + sd * rng.next_gaussian();
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_indices(
    const JointDiscrete& dist, std::size_t n, std::uint64_t seed,
    std::uint64_t stream) {
  const auto flat_idx = sample_indices(dist.flatten(), n, seed, stream);
  std::vector<std::pair<std::size_t, std::size_t>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = {flat_idx[k] / dist.y_size(), flat_idx[k] % dist.y_size()};
  }
  return out;
}

}  // namespace gentropy
