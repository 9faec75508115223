#include "gentropy/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "gentropy/records.hpp"

namespace gentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_common_support(const DiscreteDist& p, const DiscreteDist& q,
                            const char* what) {
  if (!p.same_support(q)) {
    throw std::invalid_argument(std::string(what) +
                                ": distributions must share a support list");
  }
}

}  // namespace

double tv(const DiscreteDist& p, const DiscreteDist& q) {
  require_common_support(p, q, "tv");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += std::abs(p.prob(i) - q.prob(i));
  }
  return 0.5 * s;
}

double kl(const DiscreteDist& p, const DiscreteDist& q) {
  require_common_support(p, q, "kl");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.prob(i);
    if (pi == 0.0) continue;
    const double qi = q.prob(i);
    if (qi == 0.0) return kInf;
    s += pi * std::log(pi / qi);
  }
  return std::max(s, 0.0);
}

double kl(const GaussianScalar& p, const GaussianScalar& q) {
  const double dmu = p.mean - q.mean;
  return 0.5 * std::log(q.variance / p.variance) +
         (p.variance + dmu * dmu) / (2.0 * q.variance) - 0.5;
}

double chi2(const DiscreteDist& p, const DiscreteDist& q) {
  require_common_support(p, q, "chi2");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p.prob(i) - q.prob(i);
    if (q.prob(i) == 0.0) {
      if (p.prob(i) > 0.0) return kInf;
      continue;
    }
    s += diff * diff / q.prob(i);
  }
  return s;
}

double shannon_entropy(const DiscreteDist& q) {
  double h = 0.0;
  for (double w : q.probs()) {
    if (w > 0.0) h -= w * std::log(w);
  }
  return h;
}

double cross_entropy(const DiscreteDist& q, const DiscreteDist& p) {
  require_common_support(q, p, "cross_entropy");
  double h = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = q.prob(i);
    if (w == 0.0) continue;
    if (p.prob(i) == 0.0) return kInf;
    h -= w * std::log(p.prob(i));
  }
  return h;
}

double renyi_cross(const DiscreteDist& q, const DiscreteDist& p,
                   double alpha) {
  require_common_support(q, p, "renyi_cross");
  if (alpha == 1.0) return cross_entropy(q, p);
  // Log-sum-exp of log q_i + (alpha - 1) log p_i; plain powers overflow for
  // orders far from 1.
  std::vector<double> terms;
  terms.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = q.prob(i);
    if (w == 0.0) continue;
    const double log_p = p.prob(i) > 0.0 ? std::log(p.prob(i)) : -kInf;
    terms.push_back(std::log(w) + (alpha - 1.0) * log_p);
  }
  const double m = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(m)) {
    // m = +inf: support violation with alpha < 1; m = -inf: disjoint mass
    // with alpha > 1. Both yield +inf after the 1/(1 - alpha) sign.
    return kInf;
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - m);
  return (m + std::log(sum)) / (1.0 - alpha);
}

double renyi_entropy(const DiscreteDist& q, double alpha) {
  if (alpha == 1.0) return shannon_entropy(q);
  return renyi_cross(q, q, alpha);
}

double varentropy(const DiscreteDist& q) { return cross_varentropy(q, q); }

double cross_varentropy(const DiscreteDist& q, const DiscreteDist& p) {
  require_common_support(q, p, "cross_varentropy");
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = q.prob(i);
    if (w == 0.0) continue;
    if (p.prob(i) == 0.0) return kInf;
    const double l = -std::log(p.prob(i));
    m1 += w * l;
    m2 += w * l * l;
  }
  return std::max(m2 - m1 * m1, 0.0);
}

namespace {

struct SortedAtoms {
  std::vector<double> values;
  std::vector<double> masses;
};

SortedAtoms sorted_atoms(const DiscreteDist& d) {
  const auto z = d.numeric_outcomes();
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  SortedAtoms out;
  out.values.reserve(z.size());
  out.masses.reserve(z.size());
  for (std::size_t k : order) {
    out.values.push_back(z[k]);
    out.masses.push_back(d.prob(k));
  }
  return out;
}

}  // namespace

double wasserstein1_1d(const DiscreteDist& p, const DiscreteDist& q) {
  const SortedAtoms ap = sorted_atoms(p);
  const SortedAtoms aq = sorted_atoms(q);
  std::vector<double> grid;
  grid.reserve(ap.values.size() + aq.values.size());
  grid.insert(grid.end(), ap.values.begin(), ap.values.end());
  grid.insert(grid.end(), aq.values.begin(), aq.values.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double total = 0.0;
  double fp = 0.0, fq = 0.0;
  std::size_t ip = 0, iq = 0;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    while (ip < ap.values.size() && ap.values[ip] <= grid[g]) {
      fp += ap.masses[ip++];
    }
    while (iq < aq.values.size() && aq.values[iq] <= grid[g]) {
      fq += aq.masses[iq++];
    }
    total += std::abs(fp - fq) * (grid[g + 1] - grid[g]);
  }
  return total;
}

double wasserstein2_1d(const DiscreteDist& p, const DiscreteDist& q) {
  // Quantile coupling: pair off cumulative mass from the sorted supports.
  const SortedAtoms ap = sorted_atoms(p);
  const SortedAtoms aq = sorted_atoms(q);
  double cost2 = 0.0;
  std::size_t ip = 0, iq = 0;
  double rp = ap.masses.empty() ? 0.0 : ap.masses[0];
  double rq = aq.masses.empty() ? 0.0 : aq.masses[0];
  while (ip < ap.values.size() && iq < aq.values.size()) {
    if (rp <= 0.0) {
      if (++ip >= ap.values.size()) break;
      rp = ap.masses[ip];
      continue;
    }
    if (rq <= 0.0) {
      if (++iq >= aq.values.size()) break;
      rq = aq.masses[iq];
      continue;
    }
    const double m = std::min(rp, rq);
    const double diff = ap.values[ip] - aq.values[iq];
    cost2 += m * diff * diff;
    rp -= m;
    rq -= m;
  }
  return std::sqrt(std::max(cost2, 0.0));
}

void validate_metric(const Eigen::MatrixXd& d, std::size_t support_size) {
  const auto n = static_cast<Eigen::Index>(support_size);
  if (d.rows() != n || d.cols() != n) {
    throw std::invalid_argument("metric: shape does not match the support");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) {
      throw std::invalid_argument("metric: nonzero diagonal");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!(d(i, k) >= 0.0)) {
        throw std::invalid_argument("metric: negative entry");
      }
      if (std::abs(d(i, k) - d(k, i)) > 1e-12) {
        throw std::invalid_argument("metric: not symmetric");
      }
    }
  }
  if (support_size <= 32) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
          if (d(i, k) > d(i, j) + d(j, k) + 1e-12) {
            throw std::invalid_argument("metric: triangle inequality fails");
          }
        }
      }
    }
  }
}

DiscreteDist pushforward(const DiscreteDist& p, const LossSpec& spec,
                         const Action& action) {
  std::map<double, double> atoms;  // loss value -> mass, sorted ascending
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double l = eval_loss_at(spec, p.outcomes(), i, action);
    atoms[l] += p.prob(i);
  }
  std::vector<std::string> labels;
  std::vector<double> masses;
  labels.reserve(atoms.size());
  masses.reserve(atoms.size());
  for (const auto& [value, mass] : atoms) {
    labels.push_back(numeric_label(value));
    masses.push_back(mass);
  }
  return DiscreteDist(std::move(labels), std::move(masses));
}

std::optional<double> semidistance_al(const DiscreteDist& p,
                                      const DiscreteDist& q,
                                      const LossSpec& spec) {
  require_common_support(p, q, "semidistance_al");
  switch (spec.kind()) {
    case LossKind::table: {
      const auto& t = spec.table_data();
      double best = 0.0;
      for (std::size_t a = 0; a < t.n_actions(); ++a) {
        double gap = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
          gap += (p.prob(i) - q.prob(i)) *
                 t.values(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(a));
        }
        best = std::max(best, std::abs(gap));
      }
      return best;
    }
    case LossKind::zero_one: {
      // E_P 1{Z != a} - E_Q 1{Z != a} = Q(a) - P(a).
      double best = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        best = std::max(best, std::abs(p.prob(i) - q.prob(i)));
      }
      return best;
    }
    default:
      return std::nullopt;
  }
}

double mutual_information(const JointDiscrete& j) {
  const DiscreteDist px = j.marginal_x();
  const DiscreteDist py = j.marginal_y();
  double mi = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double pxy = j.probs()(static_cast<Eigen::Index>(x),
                                   static_cast<Eigen::Index>(y));
      if (pxy <= 0.0) continue;
      mi += pxy * std::log(pxy / (px.prob(x) * py.prob(y)));
    }
  }
  return std::max(mi, 0.0);
}

double lautum_information(const JointDiscrete& j) {
  const DiscreteDist px = j.marginal_x();
  const DiscreteDist py = j.marginal_y();
  double l = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double prod = px.prob(x) * py.prob(y);
      if (prod <= 0.0) continue;
      const double pxy = j.probs()(static_cast<Eigen::Index>(x),
                                   static_cast<Eigen::Index>(y));
      if (pxy <= 0.0) return kInf;
      l += prod * std::log(prod / pxy);
    }
  }
  return std::max(l, 0.0);
}

void write_transport_plan_csv(std::ostream& os, const TransportPlan& plan) {
  os << "row,col,mass\n";
  for (Eigen::Index i = 0; i < plan.coupling.rows(); ++i) {
    for (Eigen::Index k = 0; k < plan.coupling.cols(); ++k) {
      if (plan.coupling(i, k) == 0.0) continue;
      os << i << ',' << k << ',' << format_float17(plan.coupling(i, k))
         << '\n';
    }
  }
}

Eigen::MatrixXd zero_one_metric(std::size_t n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  d.diagonal().setZero();
  return d;
}

Eigen::MatrixXd line_metric(const std::vector<double>& values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      d(i, k) = std::abs(values[static_cast<std::size_t>(i)] -
                         values[static_cast<std::size_t>(k)]);
    }
  }
  return d;
}

}  // namespace gentropy
