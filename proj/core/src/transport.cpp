#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "gentropy/divergence.hpp"

namespace gentropy {

namespace {

// Exact transportation simplex (u-v / MODI method) on dense desk-scale
// instances. Dantzig pricing with a permanent switch to Bland's rule after
// a run of degenerate pivots, which guarantees termination.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& supply,
                   const std::vector<double>& demand,
                   const Eigen::MatrixXd& cost)
      : n_(supply.size()),
        m_(demand.size()),
        cost_(cost),
        value_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                     static_cast<Eigen::Index>(m_))),
        basic_(n_ * m_, false) {
    northwest_corner(supply, demand);
  }

  Eigen::MatrixXd solve() {
    const double scale = 1.0 + cost_.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale;
    bool bland = false;
    int degenerate_run = 0;
    for (long iter = 0; iter < 1000000; ++iter) {
      compute_potentials();
      const auto entering = pick_entering(tol, bland);
      if (!entering) return value_;
      const double delta = pivot(entering->first, entering->second);
      if (delta == 0.0) {
        if (++degenerate_run > 4 * static_cast<int>(n_ + m_)) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
    throw std::runtime_error("transport: simplex failed to terminate");
  }

 private:
  std::size_t cell(std::size_t i, std::size_t k) const { return i * m_ + k; }

  void northwest_corner(std::vector<double> supply,
                        std::vector<double> demand) {
    std::size_t i = 0, k = 0;
    for (std::size_t steps = 0; steps < n_ + m_; ++steps) {
      const double alloc = std::max(0.0, std::min(supply[i], demand[k]));
      basic_[cell(i, k)] = true;
      value_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          alloc;
      basis_.push_back({i, k});
      supply[i] -= alloc;
      demand[k] -= alloc;
      if (i == n_ - 1 && k == m_ - 1) break;
      if (i < n_ - 1 && (supply[i] <= demand[k] || k == m_ - 1)) {
        ++i;
      } else {
        ++k;
      }
    }
  }

  // Solve u_i + v_k = c_ik on the basis tree, rooted at u_0 = 0.
  void compute_potentials() {
    u_.assign(n_, 0.0);
    v_.assign(m_, 0.0);
    std::vector<char> row_known(n_, 0), col_known(m_, 0);
    std::vector<std::vector<std::size_t>> row_adj(n_), col_adj(m_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      row_adj[basis_[b].first].push_back(b);
      col_adj[basis_[b].second].push_back(b);
    }
    std::deque<std::pair<char, std::size_t>> queue;  // (is_col, node)
    row_known[0] = 1;
    queue.push_back({0, 0});
    while (!queue.empty()) {
      const auto [is_col, node] = queue.front();
      queue.pop_front();
      const auto& adj = is_col ? col_adj[node] : row_adj[node];
      for (std::size_t b : adj) {
        const auto [i, k] = basis_[b];
        const double c = cost_(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(k));
        if (!is_col && !col_known[k]) {
          v_[k] = c - u_[i];
          col_known[k] = 1;
          queue.push_back({1, k});
        } else if (is_col && !row_known[i]) {
          u_[i] = c - v_[k];
          row_known[i] = 1;
          queue.push_back({0, i});
        }
      }
    }
  }

  std::optional<std::pair<std::size_t, std::size_t>> pick_entering(
      double tol, bool bland) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    double best_reduced = -tol;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) {
        if (basic_[cell(i, k)]) continue;
        const double r = cost_(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(k)) -
                         u_[i] - v_[k];
        if (r < best_reduced) {
          best = {{i, k}};
          best_reduced = r;
          if (bland) return best;  // first negative index wins
        }
      }
    }
    return best;
  }

  // Entering cell closes a unique cycle with the basis tree; shift mass
  // around it. Returns the shifted amount (0 on a degenerate pivot).
  double pivot(std::size_t ei, std::size_t ek) {
    // Path from row ei to column ek through basic cells.
    std::vector<std::vector<std::size_t>> row_adj(n_), col_adj(m_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      row_adj[basis_[b].first].push_back(b);
      col_adj[basis_[b].second].push_back(b);
    }
    std::vector<int> row_parent(n_, -1), col_parent(m_, -1);
    std::vector<char> row_seen(n_, 0), col_seen(m_, 0);
    std::deque<std::pair<char, std::size_t>> queue;
    row_seen[ei] = 1;
    queue.push_back({0, ei});
    while (!queue.empty() && !col_seen[ek]) {
      const auto [is_col, node] = queue.front();
      queue.pop_front();
      const auto& adj = is_col ? col_adj[node] : row_adj[node];
      for (std::size_t b : adj) {
        const auto [i, k] = basis_[b];
        if (!is_col && !col_seen[k]) {
          col_seen[k] = 1;
          col_parent[k] = static_cast<int>(b);
          queue.push_back({1, k});
        } else if (is_col && !row_seen[i]) {
          row_seen[i] = 1;
          row_parent[i] = static_cast<int>(b);
          queue.push_back({0, i});
        }
      }
    }
    if (!col_seen[ek]) {
      throw std::runtime_error("transport: basis is not a spanning tree");
    }

    // Walk back from column ek to row ei, collecting the path cells; odd
    // positions (first, third, ...) lose mass, even positions gain.
    std::vector<std::size_t> path;
    std::size_t col = ek;
    while (true) {
      const std::size_t b_to_row = static_cast<std::size_t>(col_parent[col]);
      path.push_back(b_to_row);
      const std::size_t row = basis_[b_to_row].first;
      if (row == ei) break;
      const std::size_t b_to_col = static_cast<std::size_t>(row_parent[row]);
      path.push_back(b_to_col);
      col = basis_[b_to_col].second;
    }

    double delta = std::numeric_limits<double>::infinity();
    std::size_t leaving = path[0];
    for (std::size_t pos = 0; pos < path.size(); pos += 2) {
      const auto [i, k] = basis_[path[pos]];
      const double val = value_(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(k));
      if (val < delta ||
          (val == delta && cell(i, k) < cell(basis_[leaving].first,
                                             basis_[leaving].second))) {
        delta = val;
        leaving = path[pos];
      }
    }

    for (std::size_t pos = 0; pos < path.size(); ++pos) {
      const auto [i, k] = basis_[path[pos]];
      auto& val =
          value_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      val += (pos % 2 == 0) ? -delta : delta;
      if (val < 0.0) val = 0.0;
    }

    const auto [li, lk] = basis_[leaving];
    value_(static_cast<Eigen::Index>(li), static_cast<Eigen::Index>(lk)) = 0.0;
    basic_[cell(li, lk)] = false;
    basic_[cell(ei, ek)] = true;
    value_(static_cast<Eigen::Index>(ei), static_cast<Eigen::Index>(ek)) +=
        delta;
    basis_[leaving] = {ei, ek};
    return delta;
  }

  std::size_t n_, m_;
  const Eigen::MatrixXd& cost_;
  Eigen::MatrixXd value_;
  std::vector<char> basic_;
  std::vector<std::pair<std::size_t, std::size_t>> basis_;
  std::vector<double> u_, v_;
};

}  // namespace

TransportPlan wasserstein1_discrete(const DiscreteDist& p,
                                    const DiscreteDist& q,
                                    const Eigen::MatrixXd& d) {
  if (!p.same_support(q)) {
    throw std::invalid_argument(
        "wasserstein1_discrete: distributions must share a support list");
  }
  if (p.size() > kTransportCap) {
    throw std::invalid_argument(
        "wasserstein1_discrete: support exceeds the exact-LP cap of " +
        std::to_string(kTransportCap));
  }
  validate_metric(d, p.size());

  TransportSimplex simplex(p.probs(), q.probs(), d);
  TransportPlan plan;
  plan.coupling = simplex.solve();
  plan.cost = (plan.coupling.array() * d.array()).sum();

  const double row_err =
      (plan.coupling.rowwise().sum() -
       Eigen::Map<const Eigen::VectorXd>(p.probs().data(),
                                         static_cast<Eigen::Index>(p.size())))
          .cwiseAbs()
          .maxCoeff();
  const double col_err =
      (plan.coupling.colwise().sum().transpose() -
       Eigen::Map<const Eigen::VectorXd>(q.probs().data(),
                                         static_cast<Eigen::Index>(q.size())))
          .cwiseAbs()
          .maxCoeff();
  if (row_err > 1e-10 || col_err > 1e-10) {
    throw std::runtime_error("transport: coupling marginals drifted");
  }
  return plan;
}

}  // namespace gentropy
