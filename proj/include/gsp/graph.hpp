#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsp/cube.hpp"

namespace gsp {

using Signal = Eigen::VectorXd;

/**
 * Simple undirected graph on vertices {0, ..., n-1}.
 *
 * Adjacency is stored in CSR form with each neighbor list sorted ascending.
 * Shifts store their off-diagonal entries aligned with this layout, so a
 * shift-vector product visits exactly the one-hop neighborhood of a vertex.
 */
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Rejects self-loops, duplicate edges and out-of-range endpoints.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t order() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Undirected edges normalized to i < j, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t max_degree() const;
  bool has_edge(std::size_t i, std::size_t j) const;

  // Position of vertex i's neighbor list inside the flat adjacency array.
  std::size_t row_offset(std::size_t i) const { return offsets_[i]; }
  std::size_t adjacency_size() const { return adjacency_.size(); }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
};

using GraphPtr = std::shared_ptr<const Graph>;

struct GeometricGraph {
  GraphPtr graph;
  std::vector<std::array<double, 2>> coords;
};

/// Circulant graph C(n, Q): edges (i, i +- q mod n) for q in Q, 1 <= q < n/2.
GraphPtr build_circulant(std::size_t n, const std::vector<std::size_t>& q_set);

/// n points uniform on [0,1]^2, edge iff Euclidean distance <= sqrt(2/n).
GeometricGraph build_random_geometric(std::size_t n, std::uint64_t seed);

/// First draw with seeds seed, seed + 1, ... that has no isolated vertex; `used_seed` receives that seed.
GeometricGraph build_random_geometric_no_isolated(std::size_t n, std::uint64_t seed, std::uint64_t* used_seed = nullptr,
                                                  int max_attempts = 1000);

enum class ShiftKind { adjacency, laplacian, normalized_laplacian, degree, custom };

/**
 * Real symmetric matrix supported on the edges and diagonal of a graph.
 *
 * Entries are stored as a diagonal vector plus one value per CSR adjacency
 * slot; symmetry is enforced at construction.
 */
class Shift {
 public:
  using EntryFn = std::function<double(std::size_t, std::size_t)>;

  /// Builds the shift by sampling `entry(i, i)` and `entry(i, j)` for j in N(i).
  Shift(GraphPtr graph, ShiftKind kind, const EntryFn& entry);

  const GraphPtr& graph() const { return graph_; }
  ShiftKind kind() const { return kind_; }
  std::size_t order() const { return graph_->order(); }

  double diagonal(std::size_t i) const { return diag_[i]; }
  /// Off-diagonal entries of row i, aligned with graph().neighbors(i).
  std::span<const double> off_diagonal(std::size_t i) const {
    return {offdiag_.data() + graph_->row_offset(i), graph_->degree(i)};
  }
  double entry(std::size_t i, std::size_t j) const;

  /// y = S x; x may be a vector or a matrix with order() rows.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Signal apply(const Signal& x) const;

  Eigen::MatrixXd dense() const;

  /// Returns true when every stored entry sits on a diagonal or edge slot and S(i,j) == S(j,i).
  bool check_structure() const;

 private:
  GraphPtr graph_;
  ShiftKind kind_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

Shift adjacency(const GraphPtr& g);
Shift degree_matrix(const GraphPtr& g);
Shift laplacian(const GraphPtr& g);
/// L^sym = I - D^{-1/2} A D^{-1/2}; rejects isolated vertices.
Shift normalized_laplacian(const GraphPtr& g);
/// Adjacency restricted to the circulant edges of offset q, (i, i +- q mod n), on a circulant graph g.
Shift circulant_offset_adjacency(const GraphPtr& g, std::size_t q);

/// max_{k<k'} ||S_k S_k' - S_k' S_k||_F. Throws when shifts live on different graphs.
double check_commuting(const std::vector<Shift>& shifts);

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Dense symmetric eigendecomposition.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);

/**
 * Common orthonormal eigenbasis of commuting symmetric shifts, the joint
 * spectrum lambda (n x d, row i = lambda_i) and an enclosing cube.
 */
struct SpectralData {
  std::vector<Shift> shifts;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd lambda;
  Cube cube;
  std::uint64_t seed = 0;
  int attempts = 0;

  std::size_t order() const { return static_cast<std::size_t>(basis.rows()); }
  std::size_t dim() const { return shifts.size(); }
  std::vector<double> point(std::size_t i) const;

  /// U diag(f(lambda_i)) U^T.
  Eigen::MatrixXd spectral_matrix(const std::function<double(std::span<const double>)>& f) const;
};

using SpectrumPtr = std::shared_ptr<const SpectralData>;

/**
 * Diagonalizes a random combination sum_k c_k S_k (coefficients from `seed`),
 * retrying with fresh coefficients up to 5 times when the basis fails to
 * diagonalize every shift. The cube pads spectral extremes by
 * 1e-9 (1 + max|lambda|); normalized-Laplacian axes are clamped to [0, 2].
 */
SpectrumPtr joint_spectrum(const std::vector<Shift>& shifts, std::uint64_t seed = 0);

}  // namespace gsp
