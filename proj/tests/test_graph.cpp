#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gsp/graph.hpp"

using namespace gsp;

TEST_CASE("circulant 4-cycle edges") {
  auto g = build_circulant(4, {1});
  const std::vector<Graph::Edge> expect{{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  CHECK(g->edges() == expect);
  CHECK(g->order() == 4);
}

TEST_CASE("circulant degrees are 2|Q|") {
  auto g = build_circulant(1000, {1, 2, 5});
  for (std::size_t i = 0; i < g->order(); ++i) REQUIRE(g->degree(i) == 6);
  CHECK(g->edge_count() == 3000);
}

TEST_CASE("circulant rejects bad generators") {
  CHECK_THROWS_AS(build_circulant(6, {3}), validation_error);
  CHECK_THROWS_AS(build_circulant(6, {0}), validation_error);
  CHECK_THROWS_AS(build_circulant(10, {1, 1}), validation_error);
  CHECK_THROWS_AS(build_circulant(10, {}), validation_error);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), validation_error);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), validation_error);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), validation_error);
  Graph g(3, {{2, 0}});
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("random geometric graph matches all-pairs scan") {
  const auto gg = build_random_geometric(256, 7);
  const auto again = build_random_geometric(256, 7);
  CHECK(gg.graph->edges() == again.graph->edges());

  const double r2 = 2.0 / 256.0;
  std::vector<Graph::Edge> brute;
  for (std::size_t i = 0; i < 256; ++i) {
    for (std::size_t j = i + 1; j < 256; ++j) {
      const double dx = gg.coords[i][0] - gg.coords[j][0];
      const double dy = gg.coords[i][1] - gg.coords[j][1];
      if (dx * dx + dy * dy <= r2) brute.emplace_back(i, j);
    }
  }
  CHECK(gg.graph->edges() == brute);
  for (const auto& c : gg.coords) {
    CHECK(c[0] >= 0.0);
    CHECK(c[0] < 1.0);
  }
}

TEST_CASE("random geometric graph on two vertices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto gg = build_random_geometric(2, seed);
    const double dx = gg.coords[0][0] - gg.coords[1][0];
    const double dy = gg.coords[0][1] - gg.coords[1][1];
    CHECK(gg.graph->edge_count() == (dx * dx + dy * dy <= 1.0 ? 1u : 0u));
  }
  CHECK_THROWS_AS(build_random_geometric(1, 0), validation_error);
}

TEST_CASE("normalized Laplacian entries") {
  auto edge = std::make_shared<const Graph>(2, std::vector<Graph::Edge>{{0, 1}});
  const Eigen::MatrixXd l = normalized_laplacian(edge).dense();
  Eigen::Matrix2d expect;
  expect << 1, -1, -1, 1;
  CHECK((l - expect).norm() == 0.0);

  auto cyc = build_circulant(4, {1});
  const Eigen::MatrixXd lc = normalized_laplacian(cyc).dense();
  const Eigen::MatrixXd alt = Eigen::MatrixXd::Identity(4, 4) - adjacency(cyc).dense() / 2.0;
  CHECK((lc - alt).norm() < 1e-15);
  const auto eig = symmetric_eigen(lc);
  CHECK(eig.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  CHECK(eig.values[2] == doctest::Approx(1.0));
  CHECK(eig.values[3] == doctest::Approx(2.0));

  auto iso = std::make_shared<const Graph>(3, std::vector<Graph::Edge>{{0, 1}});
  CHECK_THROWS_AS(normalized_laplacian(iso), validation_error);
  CHECK_NOTHROW(laplacian(iso));
}

TEST_CASE("normalized Laplacian row sums on an irregular graph") {
  auto g = std::make_shared<const Graph>(5, std::vector<Graph::Edge>{{0, 1}, {1, 2}, {2, 3}, {1, 4}, {3, 4}});
  const Eigen::MatrixXd dense = normalized_laplacian(g).dense();
  for (std::size_t i = 0; i < 5; ++i) {
    double expect = 1.0;
    for (std::size_t j : g->neighbors(i)) expect -= 1.0 / std::sqrt(double(g->degree(i)) * double(g->degree(j)));
    CHECK(dense.row(Eigen::Index(i)).sum() == doctest::Approx(expect).epsilon(1e-13));
  }
  const Eigen::MatrixXd reg = normalized_laplacian(build_circulant(9, {1, 2})).dense();
  CHECK(reg.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("shift symmetry and support") {
  const auto gg = build_random_geometric(128, 11);
  for (const Shift& s : {adjacency(gg.graph), laplacian(gg.graph), degree_matrix(gg.graph)}) {
    CHECK(s.check_structure());
    const Eigen::MatrixXd d = s.dense();
    CHECK((d - d.transpose()).norm() == 0.0);
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.cols(); ++j) {
        if (i != j && !gg.graph->has_edge(std::size_t(i), std::size_t(j))) REQUIRE(d(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("L^sym spectrum inside [0, 2]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = build_circulant(40 + seed, {1, 3});
    const auto eig = symmetric_eigen(normalized_laplacian(g).dense());
    CHECK(eig.values.minCoeff() > -1e-10);
    CHECK(eig.values.maxCoeff() < 2.0 + 1e-10);
  }
}

TEST_CASE("commutators") {
  auto g = build_circulant(16, {1, 2});
  const std::vector<Shift> circ{circulant_offset_adjacency(g, 1), circulant_offset_adjacency(g, 2)};
  CHECK(check_commuting(circ) == 0.0);
  CHECK(check_commuting({normalized_laplacian(g)}) == 0.0);

  const auto gg = build_random_geometric(64, 5);
  const Shift a = adjacency(gg.graph);
  const Shift dm = degree_matrix(gg.graph);
  const Eigen::MatrixXd ad = a.dense(), dd = dm.dense();
  const double oracle = (ad * dd - dd * ad).norm();
  CHECK(oracle > 0.0);
  CHECK(check_commuting({a, dm}) == doctest::Approx(oracle));

  auto other = build_circulant(16, {1});
  CHECK_THROWS_AS(check_commuting({adjacency(g), adjacency(other)}), validation_error);
}

TEST_CASE("joint spectrum of a single L^sym") {
  auto cyc = build_circulant(4, {1});
  auto spec = joint_spectrum({normalized_laplacian(cyc)}, 1);
  std::vector<double> lam(spec->lambda.data(), spec->lambda.data() + 4);
  std::sort(lam.begin(), lam.end());
  CHECK(lam[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lam[1] == doctest::Approx(1.0));
  CHECK(lam[2] == doctest::Approx(1.0));
  CHECK(lam[3] == doctest::Approx(2.0));
  CHECK(spec->cube == Cube({0.0}, {2.0}));
}

TEST_CASE("joint spectrum of the identity shift") {
  auto g = build_circulant(8, {1});
  Shift id(g, ShiftKind::custom, [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; });
  auto spec = joint_spectrum({id});
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(spec->lambda(i, 0) == doctest::Approx(1.0));
  const double pad = 1e-9 * 2.0;
  CHECK(spec->cube.lower[0] == doctest::Approx(1.0 - pad).epsilon(1e-15));
  CHECK(spec->cube.upper[0] == doctest::Approx(1.0 + pad).epsilon(1e-15));
}

TEST_CASE("joint spectrum of two circulant shifts matches the DFT") {
  const std::size_t n = 16;
  auto g = build_circulant(n, {1, 2});
  const std::vector<Shift> shifts{circulant_offset_adjacency(g, 1), circulant_offset_adjacency(g, 2)};
  auto spec = joint_spectrum(shifts, 42);

  const Eigen::MatrixXd& u = spec->basis;
  CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(16, 16)).norm() <= 1e-10 * n);
  for (std::size_t k = 0; k < 2; ++k) {
    const Eigen::MatrixXd proj = u.transpose() * shifts[k].dense() * u;
    const Eigen::MatrixXd diag = spec->lambda.col(Eigen::Index(k)).asDiagonal();
    CHECK((proj - diag).norm() <= 1e-8 * n);
  }

  // DFT oracle: multiset of (2cos(2 pi j/n), 2cos(4 pi j/n)).
  std::vector<std::pair<double, double>> expect, got;
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * double(j) / double(n);
    expect.emplace_back(2.0 * std::cos(th), 2.0 * std::cos(2.0 * th));
    got.emplace_back(spec->lambda(Eigen::Index(j), 0), spec->lambda(Eigen::Index(j), 1));
  }
  auto near = [](const auto& a, const auto& b) {
    return std::abs(a.first - b.first) < 1e-9 && std::abs(a.second - b.second) < 1e-9;
  };
  for (const auto& e : expect) {
    auto it = std::find_if(got.begin(), got.end(), [&](const auto& x) { return near(x, e); });
    REQUIRE(it != got.end());
    got.erase(it);
  }
  for (std::size_t i = 0; i < n; ++i) CHECK(spec->cube.contains(spec->point(i)));
}

TEST_CASE("joint spectrum rejects non-commuting shifts") {
  const auto gg = build_random_geometric(32, 5);
  CHECK_THROWS_AS(joint_spectrum({adjacency(gg.graph), degree_matrix(gg.graph)}), validation_error);
}

TEST_CASE("spectral matrix reproduces the shift") {
  auto g = build_circulant(20, {1, 4});
  const Shift l = normalized_laplacian(g);
  auto spec = joint_spectrum({l});
  const Eigen::MatrixXd rebuilt = spec->spectral_matrix([](std::span<const double> t) { return t[0]; });
  CHECK((rebuilt - l.dense()).norm() < 1e-12);
}
