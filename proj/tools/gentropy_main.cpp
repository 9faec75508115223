#include <clocale>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gentropy/bounds.hpp"
#include "gentropy/dist.hpp"
#include "gentropy/divergence.hpp"
#include "gentropy/entropy.hpp"
#include "gentropy/learn.hpp"
#include "gentropy/records.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;
constexpr const char* kVersion = "0.1.0";

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

gentropy::LossSpec load_loss(const std::string& kind_or_path) {
  using gentropy::LossSpec;
  if (kind_or_path == "log") return LossSpec::log_loss();
  if (kind_or_path == "quadratic") return LossSpec::quadratic();
  if (kind_or_path == "zero-one" || kind_or_path == "zero_one") {
    return LossSpec::zero_one();
  }
  if (kind_or_path == "absolute") return LossSpec::absolute();
  return LossSpec::from_json(load_json(kind_or_path));
}

json action_json(const gentropy::Action& action, const gentropy::LossSpec& spec,
                 const gentropy::DiscreteDist* context) {
  using gentropy::Action;
  if (std::holds_alternative<double>(action)) {
    return std::get<double>(action);
  }
  if (std::holds_alternative<std::size_t>(action)) {
    const std::size_t idx = std::get<std::size_t>(action);
    json j{{"index", idx}};
    if (spec.is_table()) {
      j["label"] = spec.table_data().action_labels.at(idx);
    } else if (context) {
      j["label"] = context->outcome(idx);
    }
    return j;
  }
  if (std::holds_alternative<gentropy::DiscreteDist>(action)) {
    const auto& d = std::get<gentropy::DiscreteDist>(action);
    if (context && d.same_support(*context) && d.probs() == context->probs()) {
      return "self";
    }
    return d.to_json();
  }
  const auto& g = std::get<gentropy::GaussianScalar>(action);
  return json{{"mean", g.mean}, {"variance", g.variance}};
}

// FNV-1a over the canonical dump; stable across runs for the manifest.
std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

int cmd_entropy(const std::string& dist_path, const std::string& loss_arg) {
  const json dj = load_json(dist_path);
  const gentropy::LossSpec spec = load_loss(loss_arg);
  json out;
  if (dj.contains("variance") || dj.contains("mean")) {
    const gentropy::GaussianScalar g(dj.value("mean", 0.0),
                                     dj.at("variance").get<double>());
    const auto r = gentropy::generalized_entropy(g, spec);
    out = {{"value", r.value},
           {"action", action_json(r.optimal_action, spec, nullptr)},
           {"achieved", r.achieved}};
  } else {
    const auto d = gentropy::DiscreteDist::from_json(dj);
    const auto r = gentropy::generalized_entropy(d, spec);
    out = {{"value", r.value},
           {"action", action_json(r.optimal_action, spec, &d)},
           {"achieved", r.achieved}};
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

gentropy::CgfEnvelope load_envelope(const std::string& arg) {
  using gentropy::CgfEnvelope;
  if (arg.find(':') != std::string::npos) {
    return CgfEnvelope::from_preset(arg);
  }
  const json j = load_json(arg);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "subgaussian") {
    return CgfEnvelope::subgaussian(j.at("sigma2").get<double>());
  }
  if (kind == "chi-square" || kind == "chi_square") {
    return CgfEnvelope::chi_square(j.at("sigma2").get<double>());
  }
  if (kind == "table") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& pt : j.at("points")) {
      knots.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
    }
    return CgfEnvelope::from_table(std::move(knots));
  }
  throw std::invalid_argument("unknown envelope kind '" + kind + "'");
}

int cmd_bounds(const std::string& p_path, const std::string& q_path,
               const std::string& loss_arg,
               const std::vector<std::string>& families,
               const std::optional<std::string>& metric_path,
               const std::optional<std::string>& envelope_arg) {
  using namespace gentropy;
  const DiscreteDist p = DiscreteDist::from_json(load_json(p_path));
  const DiscreteDist q = DiscreteDist::from_json(load_json(q_path));
  const LossSpec spec = load_loss(loss_arg);

  const auto wanted = [&](const std::string& family) {
    return families.empty() ||
           std::find(families.begin(), families.end(), family) !=
               families.end();
  };
  std::vector<BoundReport> reports;
  const auto push_pair = [&](const BoundPair& pair) {
    reports.push_back(pair.upper);
    reports.push_back(pair.lower);
  };
  if (wanted("tv")) push_pair(tv_bound(p, q, spec));
  if (wanted("kl")) {
    push_pair(kl_subgaussian_bound(p, q, spec));
    if (spec.kind() == LossKind::log) push_pair(renyi_condition_bound(p, q));
    if (envelope_arg) {
      const CgfEnvelope env = load_envelope(*envelope_arg);
      push_pair(kl_general_bound(p, q, spec, env, env));
    }
  }
  if (wanted("chi2")) push_pair(chi2_bound(p, q, spec));
  if (wanted("pushforward")) {
    push_pair(pushforward_bounds(p, q, spec, DivergenceKind::tv));
    push_pair(pushforward_bounds(p, q, spec, DivergenceKind::kl));
    push_pair(pushforward_bounds(p, q, spec, DivergenceKind::chi2));
    push_pair(wasserstein_loss_pushforward_bound(p, q, spec));
  }
  if (wanted("wasserstein")) {
    Eigen::MatrixXd metric;
    if (metric_path) {
      const json mj = load_json(*metric_path);
      const auto rows = mj.get<std::vector<std::vector<double>>>();
      metric.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.empty() ? 0
                                                           : rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
          metric(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
              rows[i][k];
        }
      }
    } else if (p.has_numeric_outcomes()) {
      metric = line_metric(p.numeric_outcomes());
    } else {
      metric = zero_one_metric(p.size());
    }
    push_pair(wasserstein_lipschitz_bound(p, q, spec, metric));
  }
  if (wanted("semidistance")) {
    reports.push_back(semidistance_bound(p, q, spec));
  }
  if (wanted("baseline")) {
    for (auto& r : baseline_bounds(p, q)) reports.push_back(std::move(r));
  }

  // Side-by-side audit row: the actual signed entropy difference.
  try {
    const double diff = generalized_entropy(p, spec).value -
                        generalized_entropy(q, spec).value;
    BoundReport actual;
    actual.name = "actual.entropy-difference";
    actual.applicable = true;
    actual.value = diff;
    actual.citation = "actual";
    reports.push_back(actual);
  } catch (const NotApplicableError&) {
  }

  for (const auto& r : reports) std::cout << r.to_json().dump() << "\n";
  return kExitOk;
}

int cmd_figure1(int density, const std::string& out_path) {
  using namespace gentropy;
  if (density < 9) {
    std::cerr << "figure1: density must be at least 9\n";
    return kExitUsage;
  }
  std::ostringstream csv;
  csv << "p,q,bound_new,bound_zhang,new_tighter\n";
  for (const Figure1Row& row : figure1_grid(density)) {
    csv << format_float17(row.p) << ',' << format_float17(row.q) << ','
        << format_float17(row.bound_new) << ','
        << format_float17(row.bound_zhang) << ','
        << (row.new_tighter ? 1 : 0) << '\n';
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "figure1: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }
  out << csv.str();
  return kExitOk;
}

// --- experiment runners ----------------------------------------------------

std::vector<int> parse_n_grid(const json& cfg) {
  return cfg.at("n_grid").get<std::vector<int>>();
}

void run_erm_sweep(const json& cfg, std::uint64_t seed, int trials,
                   const std::vector<double>& epsilons,
                   std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const DiscreteDist p = DiscreteDist::from_json(cfg.at("dist"));
  const LossSpec spec = LossSpec::from_json(cfg.at("loss"));
  const auto points =
      erm_sweep(p, spec, parse_n_grid(cfg), trials, seed, epsilons);
  for (const auto& pt : points) {
    records.push_back({"erm_sweep", pt.n, "aggregate", "mean_excess",
                       pt.mean_excess, "erm.finite-z"});
    records.push_back({"erm_sweep", pt.n, "aggregate", "mean_tv", pt.mean_tv,
                       "erm.finite-z"});
    records.push_back({"erm_sweep", pt.n, "aggregate", "theorem_curve",
                       pt.mean_excess_curve, "erm.mean-curve"});
    for (std::size_t e = 0; e < pt.epsilons.size(); ++e) {
      const std::string tag = format_float17(pt.epsilons[e]);
      records.push_back({"erm_sweep", pt.n, "aggregate",
                         "exceed_freq@" + tag, pt.exceed_freq[e],
                         "erm.exceedance-curve"});
      records.push_back({"erm_sweep", pt.n, "aggregate",
                         "exceed_curve@" + tag, pt.exceed_curve[e],
                         "erm.exceedance-curve"});
    }
  }
}

void run_lipschitz_rate(const json& cfg, std::uint64_t seed, int trials,
                        std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const LipschitzInstance inst = make_lipschitz_instance(
      cfg.value("p", 2), cfg.value("side", 4), cfg.value("actions", 6),
      cfg.value("rho_f", 1.0), cfg.value("instance_seed", 2024));
  const auto result = lipschitz_rate_check(inst, parse_n_grid(cfg), trials,
                                           seed);
  for (const auto& pt : result.points) {
    records.push_back({"lipschitz_rate", pt.n, "aggregate", "mean_w1",
                       pt.mean_w1, "wasserstein.empirical-rate"});
    records.push_back({"lipschitz_rate", pt.n, "aggregate", "mean_excess",
                       pt.mean_excess, "erm.lipschitz"});
    records.push_back({"lipschitz_rate", pt.n, "aggregate", "max_excess_gap",
                       pt.max_excess_gap, "erm.lipschitz"});
  }
  records.push_back({"lipschitz_rate", 0, "aggregate", "w1_exponent",
                     result.fitted_w1_exponent,
                     "wasserstein.empirical-rate"});
  records.push_back({"lipschitz_rate", 0, "aggregate", "rho_z", result.rho_z,
                     "erm.lipschitz"});
}

void run_expfam(const json& cfg, std::uint64_t seed, int trials,
                std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const JointDiscrete pj = JointDiscrete::from_json(cfg.at("joint"));
  const auto rows = cfg.at("potential").get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd phi(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t d = 0; d < rows[i].size(); ++d) {
      phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          rows[i][d];
    }
  }
  std::vector<double> base(rows.size(), 1.0);
  if (cfg.contains("base")) base = cfg["base"].get<std::vector<double>>();
  const ExpFamily fam(phi, base);
  const LossSpec spec = LossSpec::from_json(cfg.at("loss"));
  const auto points = expfam_learning_experiment(pj, fam, spec,
                                                 parse_n_grid(cfg), trials,
                                                 seed);
  for (const auto& pt : points) {
    records.push_back({"expfam", pt.n, "aggregate", "mean_excess",
                       pt.mean_excess, "expfam.projection"});
    records.push_back({"expfam", pt.n, "aggregate", "approx_term",
                       pt.approx_term, "expfam.projection"});
    records.push_back({"expfam", pt.n, "aggregate", "estim_term",
                       pt.mean_estimation_term, "expfam.projection"});
    records.push_back({"expfam", pt.n, "aggregate", "estim_term_median",
                       pt.median_estimation_term, "expfam.projection"});
    records.push_back({"expfam", pt.n, "aggregate", "decomposition_bound",
                       pt.decomposition_bound, "expfam.projection"});
    records.push_back({"expfam", pt.n, "aggregate", "boundary_retries",
                       static_cast<double>(pt.boundary_retries),
                       "expfam.projection"});
  }
}

void run_mer_linear(const json& cfg, std::uint64_t seed, int trials,
                    std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const auto cov_rows =
      cfg.at("prior_cov").get<std::vector<std::vector<double>>>();
  const auto feat_rows =
      cfg.at("features").get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd prior(cov_rows.size(), cov_rows.size());
  for (std::size_t i = 0; i < cov_rows.size(); ++i) {
    for (std::size_t k = 0; k < cov_rows[i].size(); ++k) {
      prior(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          cov_rows[i][k];
    }
  }
  Eigen::MatrixXd features(feat_rows.size(),
                           feat_rows.empty() ? 0 : feat_rows[0].size());
  for (std::size_t i = 0; i < feat_rows.size(); ++i) {
    for (std::size_t k = 0; k < feat_rows[i].size(); ++k) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          feat_rows[i][k];
    }
  }
  const LinearGaussianModel model(
      prior, features, cfg.value("noise_var", 1.0),
      DiscreteDist::from_json(cfg.at("design")));
  const auto points = mer_linear(model, parse_n_grid(cfg), trials, seed);
  for (const auto& pt : points) {
    records.push_back({"mer_linear", pt.n, "aggregate", "mer2", pt.mer2,
                       "mer.linear"});
    records.push_back({"mer_linear", pt.n, "aggregate", "h2", pt.h2,
                       "mer.linear"});
    records.push_back({"mer_linear", pt.n, "aggregate", "relaxed_bound",
                       pt.relaxed_bound, "mer.relaxed"});
    records.push_back({"mer_linear", pt.n, "aggregate", "theorem_bound",
                       pt.theorem_bound, "mer.nonlinear-bound"});
  }
}

void run_mer_nonlinear(const json& cfg, std::uint64_t seed, int trials,
                       std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const DiscreteDist design = DiscreteDist::from_json(cfg.at("design"));
  std::vector<double> w_grid;
  if (cfg.at("w_grid").is_array()) {
    w_grid = cfg["w_grid"].get<std::vector<double>>();
  } else {
    const auto& spec = cfg["w_grid"];
    const int count = spec.at("count").get<int>();
    const double lo = spec.at("lo").get<double>();
    const double hi = spec.at("hi").get<double>();
    for (int k = 0; k < count; ++k) {
      w_grid.push_back(lo + (hi - lo) * k / (count - 1));
    }
  }
  std::vector<double> prior;
  if (cfg.contains("prior") && cfg["prior"].is_array()) {
    prior = cfg["prior"].get<std::vector<double>>();
  } else {
    prior.assign(w_grid.size(), 1.0 / static_cast<double>(w_grid.size()));
  }
  Eigen::MatrixXd g(design.size(), w_grid.size());
  if (cfg.at("g").is_array()) {
    const auto g_rows = cfg["g"].get<std::vector<std::vector<double>>>();
    for (std::size_t i = 0; i < g_rows.size(); ++i) {
      for (std::size_t k = 0; k < g_rows[i].size(); ++k) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            g_rows[i][k];
      }
    }
  } else if (cfg["g"].get<std::string>() == "sin") {
    const auto xs = design.numeric_outcomes();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t k = 0; k < w_grid.size(); ++k) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            std::sin(w_grid[k] * xs[i]);
      }
    }
  } else {
    throw std::invalid_argument("mer_nonlinear: g must be a table or 'sin'");
  }
  const NonlinearMerModel model(w_grid, prior, g, cfg.value("noise_var", 1.0),
                                design);
  const auto result =
      mer_nonlinear_bound(model, parse_n_grid(cfg), trials, seed);
  for (const auto& pt : result.points) {
    records.push_back({"mer_nonlinear", pt.n, "aggregate", "mer_mc",
                       pt.mer_mc, "mer.nonlinear-bound"});
    records.push_back({"mer_nonlinear", pt.n, "aggregate", "h2", pt.h2,
                       "mer.nonlinear-bound"});
    records.push_back({"mer_nonlinear", pt.n, "aggregate", "posterior_kl",
                       pt.posterior_kl, "mer.posterior-sample"});
    records.push_back({"mer_nonlinear", pt.n, "aggregate", "posterior_kl_bound",
                       pt.posterior_kl_bound, "mer.posterior-sample"});
    records.push_back({"mer_nonlinear", pt.n, "aggregate", "theorem_bound",
                       pt.theorem_bound, "mer.nonlinear-bound"});
  }
  records.push_back({"mer_nonlinear", 0, "aggregate", "s_g2", result.s_g2,
                     "mer.nonlinear-bound"});
  records.push_back({"mer_nonlinear", 0, "aggregate", "coarse_grid_warning",
                     result.coarse_grid_warning ? 1.0 : 0.0,
                     "mer.nonlinear-bound"});
}

void run_mismatch(const json& cfg, std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const JointDiscrete pj = JointDiscrete::from_json(cfg.at("pj"));
  const JointDiscrete qj = JointDiscrete::from_json(cfg.at("qj"));
  const LossSpec spec = LossSpec::from_json(cfg.at("loss"));
  const MismatchResult r = mismatch_excess(pj, qj, spec);
  for (const auto& report : r.reports) {
    records.push_back({"mismatch", 0, "aggregate", report.name,
                       report.value.value_or(0.0), report.citation});
  }
  for (const auto& report : cond_entropy_diff_bounds(pj, qj, spec)) {
    if (!report.applicable) continue;
    records.push_back({"mismatch", 0, "aggregate", report.name,
                       *report.value, report.citation});
  }
}

void run_mi_bounds(const json& cfg, std::vector<gentropy::Record>& records) {
  using namespace gentropy;
  const JointDiscrete j = JointDiscrete::from_json(cfg.at("joint"));
  records.push_back({"mi_bounds", 0, "aggregate", "mutual_information",
                     mutual_information(j), "actual"});
  for (const auto& report : mi_upper_bounds(j)) {
    records.push_back({"mi_bounds", 0, "aggregate", report.name,
                       report.value.value_or(
                           std::numeric_limits<double>::quiet_NaN()),
                       report.citation});
  }
}

int cmd_experiment(const std::string& config_path,
                   std::optional<std::uint64_t> seed_flag,
                   std::optional<int> trials_flag,
                   std::optional<double> epsilon_flag,
                   const std::string& out_dir) {
  const json cfg = load_json(config_path);
  const std::string name = cfg.at("experiment").get<std::string>();
  const std::uint64_t seed = seed_flag.value_or(cfg.value("seed", 0));
  const int trials = trials_flag.value_or(cfg.value("trials", 100));
  std::vector<double> epsilons = cfg.value("epsilon", std::vector<double>{});
  if (epsilon_flag) epsilons = {*epsilon_flag};
  if (epsilons.empty()) epsilons = {0.1};

  std::vector<gentropy::Record> records;
  if (name == "erm_sweep") {
    run_erm_sweep(cfg, seed, trials, epsilons, records);
  } else if (name == "lipschitz_rate") {
    run_lipschitz_rate(cfg, seed, trials, records);
  } else if (name == "expfam") {
    run_expfam(cfg, seed, trials, records);
  } else if (name == "mer_linear") {
    run_mer_linear(cfg, seed, trials, records);
  } else if (name == "mer_nonlinear") {
    run_mer_nonlinear(cfg, seed, trials, records);
  } else if (name == "mismatch") {
    run_mismatch(cfg, records);
  } else if (name == "mi_bounds") {
    run_mi_bounds(cfg, records);
  } else {
    std::cerr << "unknown experiment '" << name
              << "'; valid names: erm_sweep, lipschitz_rate, expfam, "
                 "mer_linear, mer_nonlinear, mismatch, mi_bounds\n";
    return kExitUsage;
  }

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(std::filesystem::path(out_dir) / "records.csv",
                      std::ios::binary);
    gentropy::write_records_csv(csv, records);
  }
  {
    json manifest{{"experiment", name},
                  {"seed", seed},
                  {"trials", trials},
                  {"config_fnv1a", fnv1a_hex(cfg.dump())},
                  {"version", kVersion},
                  {"records", "records.csv"}};
    std::ofstream mf(std::filesystem::path(out_dir) / "manifest.json",
                     std::ios::binary);
    mf << manifest.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  CLI::App app{"Generalized entropy, entropy-difference bounds, and "
               "desk-scale learning experiments"};
  app.require_subcommand(1);

  std::string dist_path, loss_arg = "log";
  auto* entropy_cmd =
      app.add_subcommand("entropy", "Generalized entropy of a distribution");
  entropy_cmd->add_option("--dist", dist_path, "distribution JSON file")
      ->required();
  entropy_cmd->add_option("--loss", loss_arg,
                          "loss kind (log, quadratic, zero-one, absolute) or "
                          "a loss-spec JSON file");

  std::string p_path, q_path;
  std::vector<std::string> families;
  std::string metric_path, envelope_arg;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Entropy-difference bound report");
  bounds_cmd->add_option("--p", p_path, "P distribution JSON")->required();
  bounds_cmd->add_option("--q", q_path, "Q distribution JSON")->required();
  bounds_cmd->add_option("--loss", loss_arg, "loss kind or spec file");
  bounds_cmd->add_option("--family", families,
                         "restrict to families (tv, kl, chi2, pushforward, "
                         "wasserstein, semidistance, baseline)");
  bounds_cmd->add_option("--metric", metric_path,
                         "metric matrix JSON for the Wasserstein family");
  bounds_cmd->add_option(
      "--envelope", envelope_arg,
      "CGF envelope for the generalized-inverse KL bound: "
      "subgaussian:<s2>, chi-square:<s2>, or an envelope JSON file");

  int density = 99;
  std::string out_path = "figure1.csv";
  auto* fig_cmd = app.add_subcommand(
      "figure1", "Bernoulli bound-comparison grid (CSV)");
  fig_cmd->add_option("--density", density, "grid points per axis (>= 9)");
  fig_cmd->add_option("--out", out_path, "output CSV path");

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> trials_flag;
  std::optional<double> epsilon_flag;
  auto* exp_cmd =
      app.add_subcommand("experiment", "Run a named experiment from a config");
  exp_cmd->add_option("--config", config_path, "experiment config JSON")
      ->required();
  exp_cmd->add_option("--seed", seed_flag, "seed override (default 0)");
  exp_cmd->add_option("--trials", trials_flag, "trial count override");
  exp_cmd->add_option("--epsilon", epsilon_flag, "typicality epsilon");
  exp_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (entropy_cmd->parsed()) return cmd_entropy(dist_path, loss_arg);
    if (bounds_cmd->parsed()) {
      return cmd_bounds(p_path, q_path, loss_arg, families,
                        metric_path.empty()
                            ? std::nullopt
                            : std::optional<std::string>(metric_path),
                        envelope_arg.empty()
                            ? std::nullopt
                            : std::optional<std::string>(envelope_arg));
    }
    if (fig_cmd->parsed()) return cmd_figure1(density, out_path);
    if (exp_cmd->parsed()) {
      return cmd_experiment(config_path, seed_flag, trials_flag, epsilon_flag,
                            out_dir);
    }
  } catch (const gentropy::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
