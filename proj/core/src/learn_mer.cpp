#include <algorithm>
#include <cmath>

#include "gentropy/learn.hpp"
#include "gentropy/rng.hpp"

namespace gentropy {

LinearGaussianModel::LinearGaussianModel(Eigen::MatrixXd prior_cov_,
                                         Eigen::MatrixXd features_,
                                         double noise_var_,
                                         DiscreteDist design_)
    : prior_cov(std::move(prior_cov_)),
      features(std::move(features_)),
      noise_var(noise_var_),
      design(std::move(design_)) {
  if (prior_cov.rows() != prior_cov.cols()) {
    throw std::invalid_argument("LinearGaussianModel: prior must be square");
  }
  if ((prior_cov - prior_cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument(
        "LinearGaussianModel: prior must be symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(prior_cov).info() != Eigen::Success) {
    throw std::invalid_argument(
        "LinearGaussianModel: prior covariance is not positive definite");
  }
  if (features.cols() != prior_cov.rows()) {
    throw std::invalid_argument(
        "LinearGaussianModel: feature dimension mismatch");
  }
  if (features.rows() != static_cast<Eigen::Index>(design.size())) {
    throw std::invalid_argument(
        "LinearGaussianModel: one feature row per design point required");
  }
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("LinearGaussianModel: noise variance <= 0");
  }
}

double LinearGaussianModel::s_g2() const {
  double s = 0.0;
  for (std::size_t x = 0; x < design.size(); ++x) {
    s += design.prob(x) *
         features.row(static_cast<Eigen::Index>(x)).squaredNorm();
  }
  return s;
}

std::vector<MerPoint> mer_linear(const LinearGaussianModel& model,
                                 const std::vector<int>& n_grid, int trials,
                                 std::uint64_t seed) {
  const auto d = model.prior_cov.rows();
  const Eigen::MatrixXd prior_inv =
      model.prior_cov.llt().solve(Eigen::MatrixXd::Identity(d, d));
  const double sg2 = model.s_g2();

  std::vector<MerPoint> out;
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const int n = n_grid[ni];
    MerPoint point;
    point.n = n;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(t);
      const auto idx =
          sample_indices(model.design, static_cast<std::size_t>(n), seed,
                         stream);
      // Gaussian conjugacy: the posterior covariance depends on the design
      // only, so responses never need to be simulated.
      Eigen::MatrixXd precision = prior_inv;
      for (std::size_t i : idx) {
        const Eigen::VectorXd phi =
            model.features.row(static_cast<Eigen::Index>(i)).transpose();
        precision += phi * phi.transpose() / model.noise_var;
      }
      const Eigen::MatrixXd sigma_n =
          precision.llt().solve(Eigen::MatrixXd::Identity(d, d));
      point.h2 += sigma_n.trace();
      double mer = 0.0;
      for (std::size_t x = 0; x < model.design.size(); ++x) {
        const Eigen::VectorXd phi =
            model.features.row(static_cast<Eigen::Index>(x)).transpose();
        mer += model.design.prob(x) * phi.dot(sigma_n * phi);
      }
      point.mer2 += mer;
    }
    point.h2 /= trials;
    point.mer2 /= trials;
    point.relaxed_bound = sg2 * point.h2;
    point.theorem_bound =
        std::sqrt(4.0 * model.noise_var * sg2 * point.h2) +
        2.0 * sg2 * point.h2;
    out.push_back(point);
  }
  return out;
}

NonlinearMerModel::NonlinearMerModel(std::vector<double> w_grid_,
                                     std::vector<double> prior_,
                                     Eigen::MatrixXd g_, double noise_var_,
                                     DiscreteDist design_)
    : w_grid(std::move(w_grid_)),
      prior(std::move(prior_)),
      g(std::move(g_)),
      noise_var(noise_var_),
      design(std::move(design_)) {
  if (w_grid.size() < 3 || w_grid.size() > 1000) {
    throw std::invalid_argument(
        "NonlinearMerModel: w grid must have 3..1000 atoms");
  }
  if (prior.size() != w_grid.size()) {
    throw std::invalid_argument("NonlinearMerModel: prior length mismatch");
  }
  double mass = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("NonlinearMerModel: negative prior mass");
    }
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw std::invalid_argument("NonlinearMerModel: prior must sum to 1");
  }
  const double h0 = w_grid[1] - w_grid[0];
  for (std::size_t k = 1; k + 1 < w_grid.size(); ++k) {
    const double h = w_grid[k + 1] - w_grid[k];
    if (!(h > 0.0) || std::abs(h - h0) > 1e-9 * std::max(1.0, std::abs(h0))) {
      throw std::invalid_argument(
          "NonlinearMerModel: w grid must be uniformly spaced and "
          "increasing");
    }
  }
  if (g.rows() != static_cast<Eigen::Index>(design.size()) ||
      g.cols() != static_cast<Eigen::Index>(w_grid.size())) {
    throw std::invalid_argument("NonlinearMerModel: g table shape mismatch");
  }
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("NonlinearMerModel: noise variance <= 0");
  }
}

NonlinearMerResult mer_nonlinear_bound(const NonlinearMerModel& model,
                                       const std::vector<int>& n_grid,
                                       int trials, std::uint64_t seed) {
  const std::size_t nw = model.w_grid.size();
  const std::size_t nx = model.design.size();
  const double h = model.w_grid[1] - model.w_grid[0];
  const double s2 = model.noise_var;

  // s_g^2 = E_x[sup_w |dg/dw|^2] by finite differences; the one-sided
  // estimates expose discretizations too coarse for the surrogate.
  NonlinearMerResult result;
  for (std::size_t x = 0; x < nx; ++x) {
    double sup_c = 0.0, sup_f = 0.0, sup_b = 0.0;
    for (std::size_t k = 0; k < nw; ++k) {
      const auto xi = static_cast<Eigen::Index>(x);
      if (k + 1 < nw) {
        const double fwd = (model.g(xi, static_cast<Eigen::Index>(k + 1)) -
                            model.g(xi, static_cast<Eigen::Index>(k))) /
                           h;
        sup_f = std::max(sup_f, fwd * fwd);
      }
      if (k > 0) {
        const double bwd = (model.g(xi, static_cast<Eigen::Index>(k)) -
                            model.g(xi, static_cast<Eigen::Index>(k - 1))) /
                           h;
        sup_b = std::max(sup_b, bwd * bwd);
      }
      const double ctr =
          k == 0 ? (model.g(xi, 1) - model.g(xi, 0)) / h
          : k + 1 == nw
              ? (model.g(xi, static_cast<Eigen::Index>(nw - 1)) -
                 model.g(xi, static_cast<Eigen::Index>(nw - 2))) /
                    h
              : (model.g(xi, static_cast<Eigen::Index>(k + 1)) -
                 model.g(xi, static_cast<Eigen::Index>(k - 1))) /
                    (2.0 * h);
      sup_c = std::max(sup_c, ctr * ctr);
    }
    const double px = model.design.prob(x);
    result.s_g2 += px * sup_c;
    result.s_g2_forward += px * sup_f;
    result.s_g2_backward += px * sup_b;
  }
  const double sided_gap = std::abs(result.s_g2_forward - result.s_g2_backward);
  result.coarse_grid_warning =
      sided_gap > 0.1 * std::max(result.s_g2_forward, result.s_g2_backward);

  const DiscreteDist prior_dist = [&] {
    std::vector<std::string> labels(nw);
    for (std::size_t k = 0; k < nw; ++k) {
      labels[k] = numeric_label(model.w_grid[k]);
    }
    return DiscreteDist(std::move(labels), model.prior);
  }();

  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const int n = n_grid[ni];
    NonlinearMerPoint point;
    point.n = n;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(t);
      CounterRng rng(seed, stream);

      // Draw the true parameter, a design, responses; then form the exact
      // discrete posterior over the w grid.
      const std::size_t w_true =
          sample_indices(prior_dist, 1, seed, stream ^ 0x777)[0];
      const auto xs =
          sample_indices(model.design, static_cast<std::size_t>(n), seed,
                         stream ^ 0x888);
      std::vector<double> log_post(nw);
      for (std::size_t k = 0; k < nw; ++k) {
        log_post[k] = model.prior[k] > 0.0 ? std::log(model.prior[k])
                                           : -std::numeric_limits<double>::infinity();
      }
      for (std::size_t i : xs) {
        const auto xi = static_cast<Eigen::Index>(i);
        const double yi = model.g(xi, static_cast<Eigen::Index>(w_true)) +
                          std::sqrt(s2) * rng.next_gaussian();
        for (std::size_t k = 0; k < nw; ++k) {
          const double r = yi - model.g(xi, static_cast<Eigen::Index>(k));
          log_post[k] -= r * r / (2.0 * s2);
        }
      }
      const double shift = *std::max_element(log_post.begin(), log_post.end());
      std::vector<double> post(nw);
      double norm = 0.0;
      for (std::size_t k = 0; k < nw; ++k) {
        post[k] = std::exp(log_post[k] - shift);
        norm += post[k];
      }
      for (double& v : post) v /= norm;

      double mean_w = 0.0, mean_w2 = 0.0;
      for (std::size_t k = 0; k < nw; ++k) {
        mean_w += post[k] * model.w_grid[k];
        mean_w2 += post[k] * model.w_grid[k] * model.w_grid[k];
      }
      point.h2 += std::max(mean_w2 - mean_w * mean_w, 0.0);

      double mer_trial = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        double mg = 0.0, mg2 = 0.0;
        for (std::size_t k = 0; k < nw; ++k) {
          const double gv = model.g(xi, static_cast<Eigen::Index>(k));
          mg += post[k] * gv;
          mg2 += post[k] * gv * gv;
        }
        mer_trial += model.design.prob(x) * std::max(mg2 - mg * mg, 0.0);
      }
      point.mer_mc += mer_trial;
      // E[(g(x,W') - g(x,W))^2] = 2 Var_post g(x, .) for i.i.d. posterior
      // samples, so the KL chain term is mer_trial / sigma^2.
      point.posterior_kl += mer_trial / s2;
    }
    point.h2 /= trials;
    point.mer_mc /= trials;
    point.posterior_kl /= trials;
    point.posterior_kl_bound = result.s_g2 / s2 * point.h2;
    point.theorem_bound = std::sqrt(4.0 * s2 * result.s_g2 * point.h2) +
                          2.0 * result.s_g2 * point.h2;
    result.points.push_back(point);
  }
  return result;
}

}  // namespace gentropy
