#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gsp/approx_inverse.hpp"
#include "gsp/io.hpp"
#include "gsp/wiener.hpp"

namespace gsp {

// ---- graph / shift / problem configuration ----------------------------------

/// "circulant:<n>:<q1,q2,...>", "rgg:<n>:<seed>" or "file:<edge list path>".
struct GraphSpec {
  enum class Kind { circulant, random_geometric, file } kind = Kind::circulant;
  std::size_t n = 0;
  std::vector<std::size_t> q_set;
  std::uint64_t seed = 0;
  std::string path;

  static GraphSpec parse(const std::string& text);
};

struct BuiltGraph {
  GraphPtr graph;
  std::vector<std::array<double, 2>> coords;
  /// Seed of the accepted draw for random geometric graphs.
  std::uint64_t seed = 0;
};

/// Random geometric graphs are redrawn with seed, seed + 1, ... until no vertex is isolated.
BuiltGraph build_graph(const GraphSpec& spec);

/// "lsym", "laplacian", "adjacency" (one shift) or "offsets" (one adjacency per circulant generator).
std::vector<Shift> build_shifts(const BuiltGraph& g, const GraphSpec& spec, const std::string& shift);

struct ProblemSetup {
  BuiltGraph graph;
  WienerProblem problem;
  WienerConfig config;
};

/// Keys: graph, shift, h, r, g, k, p (uniform | file path), delta0, solver, iters.
ProblemSetup load_problem(const KeyValueConfig& cfg);

// ---- approximation error table -------------------------------------------------

struct ApproxErrorRow {
  std::string family;
  int degree;
  double error;
};

/// The seven Jacobi parameter pairs of the reference table followed by ChebyInt.
std::vector<ApproxSpec> reference_families();
/// (9/4 - t)(3 + t) expanded.
MultiPoly reference_h1();

std::vector<ApproxErrorRow> approx_error_table(const MultiPoly& h, const Cube& cube,
                                               const std::vector<ApproxSpec>& families, int max_degree,
                                               std::size_t density = 0);

struct CurveSample {
  std::string family;
  int degree;
  double t;
  double value;  // 1 - h(t) g_M(t)
};
/// Univariate only: `points` equispaced samples per (family, degree).
std::vector<CurveSample> approx_error_curves(const MultiPoly& h, const Cube& cube,
                                             const std::vector<ApproxSpec>& families, int max_degree,
                                             std::size_t points);

void write_approx_error_csv(std::ostream& out, const std::vector<ApproxErrorRow>& rows);
void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& rows);

// ---- inverse filtering benchmark ---------------------------------------------------

struct InverseBenchConfig {
  std::size_t n = 1000;
  std::vector<std::size_t> q_set{1, 2, 5};
  MultiPoly h = reference_h1();
  std::vector<ApproxSpec> solvers;
  int trials = 1000;
  int iterations = 5;
  std::uint64_t seed = 1;
  bool distributed = false;
};

/// Reference blocks: four Jacobi pairs and CIPA for M = 0..3, plus GD0.
std::vector<ApproxSpec> reference_bench_solvers();

struct InverseBenchRow {
  std::string solver;
  std::string family;
  int degree;
  int m;
  double mean_error;
  double stderr_error;
  std::size_t matvecs;
  std::size_t rounds;
};

std::vector<InverseBenchRow> inverse_bench(const InverseBenchConfig& config);

/// E(1..iterations) for one signal, centralized or through the simulator.
std::vector<double> inverse_errors(const PolyFilter& h, const PolyFilter& g, const Signal& x, int iterations,
                                   bool distributed = false);

void write_inverse_bench_csv(std::ostream& out, const std::vector<InverseBenchRow>& rows);

// ---- denoising ---------------------------------------------------------------------

enum class DenoiseModel { stationary, four_strip, wideband };
DenoiseModel parse_denoise_model(const std::string& text);
std::string to_string(DenoiseModel m);

struct DenoiseConfig {
  DenoiseModel model = DenoiseModel::stationary;
  std::size_t n = 256;
  std::uint64_t graph_seed = 7;
  std::vector<double> epsilons{0.5, 1.0, 1.5, 2.0};
  /// Wide-band means.
  std::vector<double> means{1.0, 5.0};
  int trials = 200;
  std::uint64_t seed = 1;
  WienerConfig wiener;
};

struct DenoiseRow {
  std::string model;
  double mean;  // wide-band c (0 otherwise)
  double epsilon;
  std::string method;
  double mean_isnr;
  double mean_snr;
  double stderr_snr;
};

/// Methods wiener0, wiener-reg, tikhonov, averaged over trials per (c, epsilon).
std::vector<DenoiseRow> denoise(const DenoiseConfig& config);

void write_denoise_csv(std::ostream& out, const std::vector<DenoiseRow>& rows);

}  // namespace gsp
