#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gsp/experiments.hpp"
#include "gsp/signals.hpp"

using namespace gsp;

TEST_CASE("graph spec parsing") {
  const auto c = GraphSpec::parse("circulant:64:1,2,5");
  CHECK(c.kind == GraphSpec::Kind::circulant);
  CHECK(c.n == 64);
  CHECK(c.q_set == std::vector<std::size_t>{1, 2, 5});
  const auto r = GraphSpec::parse("rgg:100:3");
  CHECK(r.kind == GraphSpec::Kind::random_geometric);
  CHECK(r.seed == 3);
  CHECK(GraphSpec::parse("file:/tmp/a:b.txt").path == "/tmp/a:b.txt");
  CHECK_THROWS_AS(GraphSpec::parse("circulant:64"), validation_error);
  CHECK_THROWS_AS(GraphSpec::parse("rgg:x:1"), validation_error);
  CHECK_THROWS_AS(GraphSpec::parse("torus:3:3"), validation_error);

  const auto built = build_graph(r);
  CHECK(built.coords.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(built.graph->degree(i) > 0);
  CHECK(build_shifts(build_graph(c), c, "offsets").size() == 3);
  CHECK_THROWS_AS(build_shifts(built, r, "offsets"), validation_error);
  CHECK_THROWS_AS(build_shifts(built, r, "bogus"), validation_error);
}

TEST_CASE("problem configuration") {
  std::istringstream in(
      "graph = circulant:16:1,3\nshift = offsets\nh = d=2; L=1,0; coeffs=4,0.5\n"
      "g = d=2; L=0,0; coeffs=0.25\nsolver = jpa:0.5:-0.5:2\niters = 30\ndelta0 = 2\n");
  const auto setup = load_problem(KeyValueConfig::parse(in, "p.cfg"));
  CHECK(setup.problem.order() == 16);
  CHECK(setup.problem.spectrum->dim() == 2);
  CHECK(setup.problem.delta0 == 2.0);
  CHECK(setup.config.solver.to_string() == ApproxSpec::jpa(0.5, -0.5, 2).to_string());
  CHECK(setup.config.inverse_iterations == 30);
  CHECK(setup.problem.p.sum() == doctest::Approx(1.0));

  std::istringstream bad("graph = circulant:16:1\nh = d=2; L=0,0; coeffs=1\n");
  CHECK_THROWS_WITH_AS(load_problem(KeyValueConfig::parse(bad, "q.cfg")), doctest::Contains("'h'"),
                       validation_error);
}

TEST_CASE("approximation error table") {
  const Cube cube({0.0}, {2.0});
  const auto rows = approx_error_table(reference_h1(), cube, reference_families(), 4);
  REQUIRE(rows.size() == 40);
  CHECK(rows[0].family == "JPA(-0.5,-0.5)");
  CHECK(std::abs(rows[0].error - 1.0463) <= 5e-3);
  CHECK(rows[35].family == "ChebyInt");
  CHECK(rows[35].error == doctest::Approx(0.75).epsilon(1e-9));

  for (const auto& r : approx_error_table(MultiPoly::constant(1, 1.0), cube, reference_families(), 3)) {
    CHECK(r.error == doctest::Approx(0.0).epsilon(1e-12));
  }

  const auto curves = approx_error_curves(reference_h1(), cube, {ApproxSpec::cipa(0)}, 1, 5);
  REQUIRE(curves.size() == 10);
  CHECK(curves.front().t == 0.0);
  CHECK(curves[4].t == 2.0);
  CHECK(curves[0].value == doctest::Approx(1.0 - 6.75 / 5.0));

  std::ostringstream os;
  write_approx_error_csv(os, rows);
  CHECK(os.str().rfind("# schema=v1\nfamily,M,b_M\n", 0) == 0);
}

TEST_CASE("eigenvector input follows the scalar recursion") {
  const auto graph = build_circulant(40, {1, 2, 5});
  const auto spectrum = joint_spectrum({normalized_laplacian(graph)});
  const PolyFilter h(spectrum, reference_h1());
  for (const auto& s : {ApproxSpec::jpa(0.5, -0.5, 1), ApproxSpec::cipa(2), ApproxSpec::gd0()}) {
    const PolyFilter g = inverse_filter(h, s);
    for (Eigen::Index i : {0, 7, 39}) {
      const Signal u = spectrum->basis.col(i);
      const double lam = spectrum->lambda(i, 0);
      const double q = std::abs(1.0 - g.poly()(lam) * h.poly()(lam));
      const auto e = inverse_errors(h, g, u, 5);
      for (int m = 1; m <= 5; ++m) CHECK(e[m - 1] == doctest::Approx(std::pow(q, m)).epsilon(1e-8).scale(1e-12));
    }
  }
}

TEST_CASE("inverse bench: distributed path matches centralized") {
  InverseBenchConfig c;
  c.n = 60;
  c.trials = 4;
  c.solvers = {ApproxSpec::jpa(0.5, -0.5, 1), ApproxSpec::cipa(2), ApproxSpec::gd0()};
  const auto central = inverse_bench(c);
  c.distributed = true;
  const auto dist = inverse_bench(c);
  REQUIRE(central.size() == 15);
  REQUIRE(dist.size() == central.size());
  for (std::size_t i = 0; i < central.size(); ++i) {
    CHECK(std::abs(central[i].mean_error - dist[i].mean_error) <= 1e-10);
    CHECK(central[i].rounds == dist[i].rounds);
  }
  CHECK(central[4].rounds == 5 * 3);
  CHECK(central[4].mean_error < central[0].mean_error);

  const auto again = inverse_bench(c);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].mean_error == dist[i].mean_error);

  c.trials = 0;
  CHECK_THROWS_AS(inverse_bench(c), validation_error);
}

TEST_CASE("denoise: vanishing noise and determinism") {
  DenoiseConfig c;
  c.n = 64;
  c.trials = 3;
  c.epsilons = {1e-6};
  for (auto model : {DenoiseModel::stationary, DenoiseModel::four_strip, DenoiseModel::wideband}) {
    c.model = model;
    const auto rows = denoise(c);
    CHECK(rows.size() == (model == DenoiseModel::wideband ? 6u : 3u));
    for (const auto& r : rows) CHECK(r.mean_snr > 60.0);
  }
  c.model = DenoiseModel::stationary;
  c.epsilons = {1.0};
  const auto a = denoise(c);
  const auto b = denoise(c);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].mean_snr == b[i].mean_snr);
  CHECK(parse_denoise_model("four-strip") == DenoiseModel::four_strip);
  CHECK_THROWS_AS(parse_denoise_model("pink"), validation_error);
  c.epsilons = {-1.0};
  CHECK_THROWS_AS(denoise(c), validation_error);
}
