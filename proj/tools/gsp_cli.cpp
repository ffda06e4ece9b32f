#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsp/distsim.hpp"
#include "gsp/errors.hpp"
#include "gsp/experiments.hpp"
#include "gsp/io.hpp"

using namespace gsp;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  bool distributed = false;
};

KeyValueConfig load_config(const Flags& f, bool required) {
  if (f.config.empty()) {
    if (required) throw validation_error("this command needs --config <file>");
    std::istringstream empty;
    return KeyValueConfig::parse(empty, "<defaults>");
  }
  return KeyValueConfig::load(f.config);
}

// Output goes to --out when given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw validation_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path);
  return out;
}

std::vector<ApproxSpec> parse_specs(const std::string& text) {
  std::vector<ApproxSpec> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw validation_error("empty solver spec in '" + text + "'");
    out.push_back(ApproxSpec::parse(item.substr(b, e - b + 1)));
  }
  return out;
}

MultiPoly poly_or(const KeyValueConfig& cfg, const std::string& key, const MultiPoly& fallback) {
  const auto text = cfg.get(key);
  return text ? parse_poly(*text) : fallback;
}

std::vector<std::size_t> to_sizes(const std::vector<double>& v, const std::string& what) {
  std::vector<std::size_t> out;
  for (double x : v) {
    if (x < 0 || x != std::floor(x)) throw validation_error(what + ": expected non-negative integers");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

int positive_trials(const Flags& f, long long fallback) {
  const long long t = f.trials ? *f.trials : fallback;
  if (t < 1) throw validation_error("trials must be >= 1");
  return static_cast<int>(t);
}

double rel_diff(const Signal& a, const Signal& b) {
  const double den = std::max(b.norm(), 1e-300);
  return (a - b).norm() / den;
}

Signal random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Signal x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

// ---- subcommands ----------------------------------------------------------------

int cmd_approx_error(const Flags& f) {
  const auto cfg = load_config(f, false);
  cfg.require_known({"h", "lower", "upper", "families", "max_degree", "density", "curve_points", "curve_out"});
  const MultiPoly h = poly_or(cfg, "h", reference_h1());
  const Cube cube(cfg.get_list("lower", std::vector<double>(h.dim(), 0.0)),
                  cfg.get_list("upper", std::vector<double>(h.dim(), 2.0)));
  if (cube.dim() != h.dim()) throw validation_error("approx-error: cube and filter dimensions differ");
  const auto families = cfg.has("families") ? parse_specs(*cfg.get("families")) : reference_families();
  const int max_degree = static_cast<int>(cfg.get_int("max_degree", 4));
  const auto density = static_cast<std::size_t>(cfg.get_int("density", 0));

  Output out(f.out);
  write_approx_error_csv(out.stream(), approx_error_table(h, cube, families, max_degree, density));

  const long long points = cfg.get_int("curve_points", 0);
  if (points > 0) {
    auto curve_out = open_out(cfg.get_or("curve_out", "approx_error_curves.csv"));
    write_curve_csv(curve_out, approx_error_curves(h, cube, families, max_degree, static_cast<std::size_t>(points)));
  }
  return 0;
}

int cmd_inverse_bench(const Flags& f) {
  const auto cfg = load_config(f, false);
  cfg.require_known({"n", "q", "h", "solvers", "iterations", "trials", "seed", "round_log"});
  InverseBenchConfig c;
  c.n = static_cast<std::size_t>(cfg.get_int("n", static_cast<long long>(c.n)));
  c.q_set = to_sizes(cfg.get_list("q", {1, 2, 5}), "q");
  c.h = poly_or(cfg, "h", c.h);
  if (cfg.has("solvers")) c.solvers = parse_specs(*cfg.get("solvers"));
  c.iterations = static_cast<int>(cfg.get_int("iterations", c.iterations));
  c.trials = positive_trials(f, cfg.get_int("trials", c.trials));
  c.seed = f.seed ? *f.seed : static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  c.distributed = f.distributed;

  Output out(f.out);
  write_inverse_bench_csv(out.stream(), inverse_bench(c));

  if (f.distributed && cfg.has("round_log")) {
    // Round log of the first solver on the first trial signal.
    const auto graph = build_circulant(c.n, c.q_set);
    const auto spectrum = joint_spectrum({normalized_laplacian(graph)});
    const PolyFilter h(spectrum, c.h);
    const auto solvers = c.solvers.empty() ? reference_bench_solvers() : c.solvers;
    const Signal x = random_signal(c.n, c.seed);
    const auto run = distsim::run_inverse(h, inverse_filter(h, solvers.front()), h.apply(x), c.iterations);
    auto log = open_out(*cfg.get("round_log"));
    run.log.write_csv(log);
  }
  return 0;
}

int cmd_denoise(const Flags& f) {
  const auto cfg = load_config(f, false);
  cfg.require_known({"model", "n", "graph_seed", "epsilons", "means", "trials", "seed", "solver"});
  DenoiseConfig c;
  c.model = parse_denoise_model(cfg.get_or("model", "stationary"));
  c.n = static_cast<std::size_t>(cfg.get_int("n", static_cast<long long>(c.n)));
  c.graph_seed = static_cast<std::uint64_t>(cfg.get_int("graph_seed", static_cast<long long>(c.graph_seed)));
  c.epsilons = cfg.get_list("epsilons", c.epsilons);
  c.means = cfg.get_list("means", c.means);
  c.trials = positive_trials(f, cfg.get_int("trials", c.trials));
  c.seed = f.seed ? *f.seed : static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  if (const auto s = cfg.get("solver")) c.wiener.solver = ApproxSpec::parse(*s);

  Output out(f.out);
  write_denoise_csv(out.stream(), denoise(c));
  return 0;
}

// Keys shared by the file-based commands on top of the problem keys.
const std::vector<std::string> kProblemKeys = {"graph", "shift", "h", "r", "g", "k", "p", "delta0",
                                               "solver", "iters", "rtol", "spectrum_seed"};

std::vector<std::string> with_keys(std::vector<std::string> extra) {
  extra.insert(extra.end(), kProblemKeys.begin(), kProblemKeys.end());
  return extra;
}

std::string output_path(const Flags& f, const KeyValueConfig& cfg) {
  if (!f.out.empty()) return f.out;
  const auto p = cfg.get("output");
  if (!p) throw validation_error(cfg.source() + ": missing key 'output' (or pass --out)");
  return *p;
}

std::string input_path(const KeyValueConfig& cfg) {
  const auto p = cfg.get("input");
  if (!p) throw validation_error(cfg.source() + ": missing key 'input'");
  return *p;
}

int cmd_filter(const Flags& f) {
  const auto cfg = load_config(f, true);
  cfg.require_known({"graph", "shift", "h", "input", "output", "trace"});
  const auto gtext = cfg.get("graph");
  if (!gtext) throw validation_error(cfg.source() + ": missing key 'graph'");
  const GraphSpec spec = GraphSpec::parse(*gtext);
  const BuiltGraph graph = build_graph(spec);
  auto shifts = build_shifts(graph, spec, cfg.get_or("shift", "lsym"));
  const auto htext = cfg.get("h");
  if (!htext) throw validation_error(cfg.source() + ": missing key 'h'");
  const PolyFilter h(std::move(shifts), parse_poly(*htext));
  const Signal x = read_signal_file(input_path(cfg));
  if (static_cast<std::size_t>(x.size()) != h.order()) {
    throw validation_error("input signal length does not match the graph order");
  }
  ApplyStats stats;
  const Signal y = h.apply(x, &stats);
  write_signal_file(output_path(f, cfg), y);
  if (const auto t = cfg.get("trace")) {
    auto out = open_out(*t);
    out << "# schema=v1\nrounds,matvecs\n" << stats.rounds << ',' << stats.matvecs << '\n';
  }
  return 0;
}

int cmd_invert(const Flags& f) {
  const auto cfg = load_config(f, true);
  cfg.require_known(with_keys({"input", "output", "trace"}));
  const ProblemSetup setup = load_problem(cfg);
  const Signal y = read_signal_file(input_path(cfg));
  if (static_cast<std::size_t>(y.size()) != setup.problem.order()) {
    throw validation_error("input signal length does not match the graph order");
  }
  SolveOptions opts;
  opts.max_iterations = setup.config.inverse_iterations;
  opts.rtol = setup.config.inverse_rtol;
  const SolveResult r = solve(setup.problem.filter(setup.problem.h), setup.config.solver, y, opts);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  write_signal_file(output_path(f, cfg), r.x);
  if (const auto t = cfg.get("trace")) {
    auto out = open_out(*t);
    r.trace.write_csv(out);
  }
  return 0;
}

int cmd_distsim_check(const Flags& f) {
  const auto cfg = load_config(f, true);
  cfg.require_known(with_keys({"input", "tolerance", "round_log", "order_seed"}));
  const ProblemSetup setup = load_problem(cfg);
  const WienerProblem& prob = setup.problem;
  const Signal x = cfg.has("input") ? read_signal_file(input_path(cfg))
                                    : random_signal(prob.order(), f.seed ? *f.seed : 1);
  if (static_cast<std::size_t>(x.size()) != prob.order()) {
    throw validation_error("input signal length does not match the graph order");
  }
  const double tol = cfg.get_double("tolerance", 1e-10);
  distsim::AccessTracer tracer;
  distsim::NetworkOptions opts;
  opts.tracer = &tracer;
  if (cfg.has("order_seed")) opts.order_seed = static_cast<std::uint64_t>(cfg.get_int("order_seed", 0));

  const PolyFilter h = prob.filter(prob.h);
  const PolyFilter g = inverse_filter(h, setup.config.solver);
  const int iters = setup.config.inverse_iterations;

  struct Check {
    std::string name;
    double error;
    std::size_t rounds;
  };
  std::vector<Check> checks;
  const auto filt = distsim::run_filter(h, x, opts);
  checks.push_back({"filter", rel_diff(filt.x, h.apply(x)), filt.log.rounds()});

  const Signal y = h.apply(x);
  SolveOptions so;
  so.max_iterations = iters;
  so.rtol = 0.0;
  const LinearMap hm = [&](const Signal& v, ApplyStats& st) { return h.apply(v, &st); };
  const LinearMap gm = [&](const Signal& v, ApplyStats& st) { return g.apply(v, &st); };
  const auto inv = distsim::run_inverse(h, g, y, iters, opts);
  checks.push_back({"inverse", rel_diff(inv.x, quasi_newton_solve(hm, gm, y, so).x), inv.log.rounds()});

  const auto mse = distsim::run_wiener_mse(prob, y, setup.config, opts);
  checks.push_back({"wiener-mse", rel_diff(mse.x, wiener_mse_apply(prob, y, setup.config).x), mse.log.rounds()});
  if (prob.delta0) {
    const auto wm = distsim::run_wiener_wmse(prob, y, setup.config, opts);
    checks.push_back(
        {"wiener-wmse", rel_diff(wm.x, worstcase_wiener_apply(prob, y, setup.config).x), wm.log.rounds()});
  }
  const std::size_t far = tracer.non_neighbor_reads(*prob.spectrum->shifts.front().graph());

  Output out(f.out);
  out.stream() << "# schema=v1\ncheck,rel_error,rounds,passed\n";
  bool ok = far == 0;
  for (const auto& c : checks) {
    const bool pass = c.error <= tol;
    ok = ok && pass;
    out.stream() << c.name << ',' << c.error << ',' << c.rounds << ',' << (pass ? 1 : 0) << '\n';
  }
  out.stream() << "locality,0," << far << ',' << (far == 0 ? 1 : 0) << '\n';
  if (const auto p = cfg.get("round_log")) {
    auto log = open_out(*p);
    mse.log.write_csv(log);
  }
  if (!ok) throw numerical_error("distributed and centralized outputs disagree");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial graph filtering, inverse filtering and Wiener denoising"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  int trials = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value configuration file");
    sub->add_option("--seed", seed, "base random seed");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--out", flags.out, "output path (stdout when omitted)");
    sub->add_flag("--distributed", flags.distributed, "run through the message-passing simulator");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Command commands[] = {
      {"approx-error", "maximal approximation errors of inverse approximants", cmd_approx_error},
      {"inverse-bench", "average relative iteration errors of inverse filtering", cmd_inverse_bench},
      {"denoise", "SNR of Wiener and Tikhonov denoisers", cmd_denoise},
      {"filter", "apply a polynomial filter to a signal file", cmd_filter},
      {"invert", "quasi-Newton inverse filtering of a signal file", cmd_invert},
      {"distsim-check", "compare simulator outputs against the centralized ones", cmd_distsim_check},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    subs.emplace_back(sub, &c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      if (sub->count("--seed")) flags.seed = seed;
      if (sub->count("--trials")) flags.trials = trials;
      return cmd->run(flags);
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
