#include "gsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace gsp {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n == 0) throw validation_error("graph: vertex count must be positive");
  for (auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      std::ostringstream msg;
      msg << "graph: edge (" << i << "," << j << ") out of range for n=" << n;
      throw validation_error(msg.str());
    }
    if (i == j) throw validation_error("graph: self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    std::ostringstream msg;
    msg << "graph: duplicate edge (" << dup->first << "," << dup->second << ")";
    throw validation_error(msg.str());
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    adjacency_[fill[i]++] = j;
    adjacency_[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < n_; ++i) best = std::max(best, degree(i));
  return best;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) return false;
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

GraphPtr build_circulant(std::size_t n, const std::vector<std::size_t>& q_set) {
  if (q_set.empty()) throw validation_error("circulant: generator set must be nonempty");
  std::set<std::size_t> seen;
  for (std::size_t q : q_set) {
    if (q < 1 || 2 * q >= n) {
      throw validation_error("circulant: generator " + std::to_string(q) + " outside [1, n/2) for n=" +
                             std::to_string(n));
    }
    if (!seen.insert(q).second) throw validation_error("circulant: duplicate generator " + std::to_string(q));
  }
  std::vector<Graph::Edge> edges;
  edges.reserve(n * q_set.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q : q_set) edges.emplace_back(i, (i + q) % n);
  }
  return std::make_shared<const Graph>(n, std::move(edges));
}

GeometricGraph build_random_geometric(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw validation_error("random geometric graph: need n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::array<double, 2>> coords(n);
  for (auto& c : coords) {
    c[0] = unit(rng);
    c[1] = unit(rng);
  }
  const double radius = std::sqrt(2.0 / static_cast<double>(n));
  const double r2 = radius * radius;

  // Bucket points into cells of side >= radius; only adjacent cells can hold neighbors.
  const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(1.0 / radius));
  auto cell_of = [&](double v) { return std::min(cells - 1, static_cast<std::size_t>(v * cells)); };
  std::vector<std::vector<std::size_t>> grid(cells * cells);
  for (std::size_t i = 0; i < n; ++i) grid[cell_of(coords[i][0]) * cells + cell_of(coords[i][1])].push_back(i);

  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cx = cell_of(coords[i][0]);
    const std::size_t cy = cell_of(coords[i][1]);
    for (std::size_t gx = (cx == 0 ? 0 : cx - 1); gx <= std::min(cells - 1, cx + 1); ++gx) {
      for (std::size_t gy = (cy == 0 ? 0 : cy - 1); gy <= std::min(cells - 1, cy + 1); ++gy) {
        for (std::size_t j : grid[gx * cells + gy]) {
          if (j <= i) continue;
          const double dx = coords[i][0] - coords[j][0];
          const double dy = coords[i][1] - coords[j][1];
          if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
        }
      }
    }
  }
  return {std::make_shared<const Graph>(n, std::move(edges)), std::move(coords)};
}

GeometricGraph build_random_geometric_no_isolated(std::size_t n, std::uint64_t seed, std::uint64_t* used_seed,
                                                  int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    GeometricGraph gg = build_random_geometric(n, seed + static_cast<std::uint64_t>(a));
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = gg.graph->degree(i) > 0;
    if (ok) {
      if (used_seed) *used_seed = seed + static_cast<std::uint64_t>(a);
      return gg;
    }
  }
  throw numerical_error("random geometric graph: every draw had an isolated vertex");
}

Shift::Shift(GraphPtr graph, ShiftKind kind, const EntryFn& entry) : graph_(std::move(graph)), kind_(kind) {
  if (!graph_) throw validation_error("shift: null graph");
  const std::size_t n = graph_->order();
  diag_.resize(n);
  offdiag_.resize(graph_->adjacency_size());
  for (std::size_t i = 0; i < n; ++i) {
    diag_[i] = entry(i, i);
    auto nb = graph_->neighbors(i);
    for (std::size_t s = 0; s < nb.size(); ++s) {
      const std::size_t j = nb[s];
      // Sample only the upper triangle so the stored matrix is exactly symmetric.
      offdiag_[graph_->row_offset(i) + s] = i < j ? entry(i, j) : entry(j, i);
    }
  }
}

double Shift::entry(std::size_t i, std::size_t j) const {
  if (i == j) return diag_[i];
  auto nb = graph_->neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return offdiag_[graph_->row_offset(i) + static_cast<std::size_t>(it - nb.begin())];
}

Eigen::MatrixXd Shift::apply(const Eigen::MatrixXd& x) const {
  const std::size_t n = order();
  if (static_cast<std::size_t>(x.rows()) != n) throw validation_error("shift apply: dimension mismatch");
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = graph_->neighbors(i);
    auto vals = off_diagonal(i);
    const auto r = static_cast<Eigen::Index>(i);
    y.row(r) = diag_[i] * x.row(r);
    for (std::size_t s = 0; s < nb.size(); ++s) y.row(r) += vals[s] * x.row(static_cast<Eigen::Index>(nb[s]));
  }
  return y;
}

Signal Shift::apply(const Signal& x) const {
  const std::size_t n = order();
  if (static_cast<std::size_t>(x.size()) != n) throw validation_error("shift apply: dimension mismatch");
  Signal y(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = graph_->neighbors(i);
    auto vals = off_diagonal(i);
    double acc = diag_[i] * x[static_cast<Eigen::Index>(i)];
    for (std::size_t s = 0; s < nb.size(); ++s) acc += vals[s] * x[static_cast<Eigen::Index>(nb[s])];
    y[static_cast<Eigen::Index>(i)] = acc;
  }
  return y;
}

Eigen::MatrixXd Shift::dense() const {
  const auto n = static_cast<Eigen::Index>(order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    a(i, i) = diag_[ui];
    auto nb = graph_->neighbors(ui);
    auto vals = off_diagonal(ui);
    for (std::size_t s = 0; s < nb.size(); ++s) a(i, static_cast<Eigen::Index>(nb[s])) = vals[s];
  }
  return a;
}

bool Shift::check_structure() const {
  const std::size_t n = order();
  if (diag_.size() != n || offdiag_.size() != graph_->adjacency_size()) return false;
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = graph_->neighbors(i);
    auto vals = off_diagonal(i);
    for (std::size_t s = 0; s < nb.size(); ++s) {
      if (nb[s] == i || !graph_->has_edge(nb[s], i)) return false;
      if (entry(nb[s], i) != vals[s]) return false;
    }
  }
  return true;
}

Shift adjacency(const GraphPtr& g) {
  return Shift(g, ShiftKind::adjacency, [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0; });
}

Shift degree_matrix(const GraphPtr& g) {
  return Shift(g, ShiftKind::degree, [&g](std::size_t i, std::size_t j) {
    return i == j ? static_cast<double>(g->degree(i)) : 0.0;
  });
}

Shift laplacian(const GraphPtr& g) {
  return Shift(g, ShiftKind::laplacian, [&g](std::size_t i, std::size_t j) {
    return i == j ? static_cast<double>(g->degree(i)) : -1.0;
  });
}

Shift normalized_laplacian(const GraphPtr& g) {
  for (std::size_t i = 0; i < g->order(); ++i) {
    if (g->degree(i) == 0) {
      throw validation_error("normalized Laplacian: vertex " + std::to_string(i) + " is isolated");
    }
  }
  return Shift(g, ShiftKind::normalized_laplacian, [&g](std::size_t i, std::size_t j) {
    if (i == j) return 1.0;
    return -1.0 / std::sqrt(static_cast<double>(g->degree(i)) * static_cast<double>(g->degree(j)));
  });
}

Shift circulant_offset_adjacency(const GraphPtr& g, std::size_t q) {
  const std::size_t n = g->order();
  if (q < 1 || 2 * q >= n) throw validation_error("circulant offset outside [1, n/2)");
  for (std::size_t i = 0; i < n; ++i) {
    if (!g->has_edge(i, (i + q) % n)) {
      throw validation_error("circulant offset " + std::to_string(q) + " is not a generator of the graph");
    }
  }
  return Shift(g, ShiftKind::custom, [n, q](std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    const std::size_t diff = (j + n - i) % n;
    return (diff == q || diff == n - q) ? 1.0 : 0.0;
  });
}

double check_commuting(const std::vector<Shift>& shifts) {
  for (const auto& s : shifts) {
    if (s.graph() != shifts.front().graph()) throw validation_error("check_commuting: shifts on different graphs");
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < shifts.size(); ++a) {
    for (std::size_t b = a + 1; b < shifts.size(); ++b) {
      const Eigen::MatrixXd db = shifts[b].dense();
      const Eigen::MatrixXd da = shifts[a].dense();
      const Eigen::MatrixXd comm = shifts[a].apply(db) - shifts[b].apply(da);
      worst = std::max(worst, comm.norm());
    }
  }
  return worst;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw numerical_error("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<double> SpectralData::point(std::size_t i) const {
  std::vector<double> t(dim());
  for (std::size_t k = 0; k < dim(); ++k) t[k] = lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  return t;
}

Eigen::MatrixXd SpectralData::spectral_matrix(const std::function<double(std::span<const double>)>& f) const {
  const auto n = basis.rows();
  Eigen::VectorXd vals(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto t = point(static_cast<std::size_t>(i));
    vals[i] = f(t);
  }
  return basis * vals.asDiagonal() * basis.transpose();
}

SpectrumPtr joint_spectrum(const std::vector<Shift>& shifts, std::uint64_t seed) {
  if (shifts.empty()) throw validation_error("joint_spectrum: need at least one shift");
  const std::size_t n = shifts.front().order();
  const double tol_comm = 1e-10 * static_cast<double>(n);
  const double comm = check_commuting(shifts);
  if (comm > tol_comm) {
    throw validation_error("joint_spectrum: shifts do not commute (commutator norm " + std::to_string(comm) + ")");
  }

  std::vector<Eigen::MatrixXd> dense;
  dense.reserve(shifts.size());
  for (const auto& s : shifts) dense.push_back(s.dense());

  const std::size_t d = shifts.size();
  const double tol_diag = 1e-8 * static_cast<double>(n);
  constexpr int max_attempts = 5;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (d == 1) {
      combo = dense[0];
    } else {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> coef(0.5, 1.5);
      for (std::size_t k = 0; k < d; ++k) combo += coef(rng) * dense[k];
    }
    const SymmetricEigen eig = symmetric_eigen(combo);

    Eigen::MatrixXd lambda(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    double residual = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const Eigen::MatrixXd proj = eig.vectors.transpose() * shifts[k].apply(eig.vectors);
      const auto col = static_cast<Eigen::Index>(k);
      lambda.col(col) = proj.diagonal();
      residual = std::max(residual, (proj - Eigen::MatrixXd(proj.diagonal().asDiagonal())).norm());
    }
    if (residual > tol_diag) continue;

    std::vector<double> lo(d), hi(d);
    for (std::size_t k = 0; k < d; ++k) {
      const Eigen::VectorXd col = lambda.col(static_cast<Eigen::Index>(k));
      const double lmin = col.minCoeff();
      const double lmax = col.maxCoeff();
      if (shifts[k].kind() == ShiftKind::normalized_laplacian) {
        // spectrum of L^sym lies in [0, 2]; clip rounding noise so the cube still contains it
        lambda.col(static_cast<Eigen::Index>(k)) = lambda.col(static_cast<Eigen::Index>(k)).cwiseMax(0.0).cwiseMin(2.0);
        lo[k] = 0.0;
        hi[k] = 2.0;
      } else {
        const double pad = 1e-9 * (1.0 + std::max(std::abs(lmin), std::abs(lmax)));
        lo[k] = lmin - pad;
        hi[k] = lmax + pad;
      }
    }
    auto out = std::make_shared<SpectralData>();
    out->shifts = shifts;
    out->basis = eig.vectors;
    out->lambda = std::move(lambda);
    out->cube = Cube(std::move(lo), std::move(hi));
    out->seed = seed;
    out->attempts = attempt + 1;
    return out;
  }
  throw numerical_error("joint_spectrum: no generic combination diagonalized all shifts after 5 attempts");
}

}  // namespace gsp
