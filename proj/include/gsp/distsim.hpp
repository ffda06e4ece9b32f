#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsp/approx_inverse.hpp"
#include "gsp/filter.hpp"
#include "gsp/wiener.hpp"

namespace gsp::distsim {

struct RoundRecord {
  std::size_t round = 0;
  std::size_t messages = 0;
  std::size_t max_agent_storage = 0;
};

struct RoundLog {
  std::vector<RoundRecord> records;

  std::size_t rounds() const { return records.size(); }
  std::size_t total_messages() const;
  std::size_t max_agent_storage() const;
  /// "# schema=v1" then "round,messages,max_agent_storage".
  void write_csv(std::ostream& out) const;
};

/// Records every (reader, sender) pair observed while agents consume their inboxes.
struct AccessTracer {
  std::vector<std::pair<std::size_t, std::size_t>> reads;

  /// Reads whose sender is neither the reader nor one of its neighbors.
  std::size_t non_neighbor_reads(const Graph& g) const;
};

using Reg = std::size_t;

struct Message {
  std::size_t src = 0;
  std::vector<double> values;
};

/**
 * One vertex agent. It holds only its own register entries, its rows of the
 * shifts, per-vertex and broadcast constants, and one inbox slot per neighbor.
 */
struct Agent {
  std::size_t id = 0;
  std::vector<std::size_t> neighbors;
  /// rows[k][0] = S_k(i,i), rows[k][1 + s] = S_k(i, neighbors[s]).
  std::vector<std::vector<double>> rows;
  std::vector<double> registers;
  std::map<std::string, std::vector<double>> constants;
  std::vector<Message> inbox;

  double& reg(Reg r) { return registers[r]; }
  double reg(Reg r) const { return registers[r]; }
  double constant(const std::string& name, std::size_t index = 0) const;
  /// Scalars held: shift rows, constants, registers and inbox capacity.
  std::size_t storage() const;
};

struct NetworkOptions {
  AccessTracer* tracer = nullptr;
  /// Agents are visited in a permutation drawn from this seed (identity when unset).
  std::optional<std::uint64_t> order_seed;
  std::size_t round_budget = static_cast<std::size_t>(-1);
  /// Per-agent register dump after every round, for debugging.
  std::ostream* snapshots = nullptr;
};

/**
 * Bulk-synchronous simulator over the shifts' graph. A round is: every agent
 * sends the requested registers to all neighbors, barrier, every agent
 * combines its inbox with its own shift row. No agent sees another agent's
 * same-round writes.
 */
class Network {
 public:
  explicit Network(std::vector<Shift> shifts, NetworkOptions options = {});

  std::size_t order() const { return agents_.size(); }
  std::size_t dim() const { return dim_; }
  const Graph& graph() const { return *graph_; }

  Reg alloc();
  void release(Reg r);
  std::size_t live_registers() const { return live_; }

  /// Vertex i receives x(i) into register r.
  void load(Reg r, const Signal& x);
  /// Collects register r from every agent (output only; agents never see it).
  Signal gather(Reg r) const;

  /// Setup-time configuration: a per-vertex value or a value known to every agent.
  void set_local_constant(const std::string& name, const Eigen::VectorXd& values);
  void broadcast(const std::string& name, std::vector<double> values);

  void local(const std::function<void(Agent&)>& op);

  /// out[c] <- S_k in[c] for every c, as one round.
  void shift_round(std::size_t k, std::span<const Reg> in, std::span<const Reg> out);

  const RoundLog& log() const { return log_; }
  std::size_t max_agent_storage() const;

 private:
  std::vector<std::size_t> visit_order() const;

  GraphPtr graph_;
  std::size_t dim_;
  std::vector<Agent> agents_;
  NetworkOptions options_;
  std::vector<Reg> free_;
  std::size_t live_ = 0;
  RoundLog log_;
};

/// Register owned by a backend value; released on destruction.
class RegHandle {
 public:
  RegHandle(Network* net, Reg id) : net_(net), id_(id) {}
  RegHandle(RegHandle&& o) noexcept : net_(std::exchange(o.net_, nullptr)), id_(o.id_) {}
  RegHandle& operator=(RegHandle&& o) noexcept {
    if (this != &o) {
      reset();
      net_ = std::exchange(o.net_, nullptr);
      id_ = o.id_;
    }
    return *this;
  }
  RegHandle(const RegHandle&) = delete;
  RegHandle& operator=(const RegHandle&) = delete;
  ~RegHandle() { reset(); }

  Reg id() const { return id_; }

 private:
  void reset() {
    if (net_) net_->release(id_);
    net_ = nullptr;
  }

  Network* net_;
  Reg id_;
};

class DistBackend {
 public:
  using Vec = RegHandle;

  explicit DistBackend(Network& net) : net_(net) {}

  Vec fresh() { return Vec(&net_, net_.alloc()); }
  Vec copy(const Vec& v);
  Vec zeros_like(const Vec& v);
  void axpy(double a, const Vec& x, Vec& y);
  void scale(Vec& v, double a);
  std::vector<Vec> shift_round(std::size_t k, std::span<const Vec* const> xs);

 private:
  Network& net_;
};

static_assert(ScheduleBackend<DistBackend>);

struct RunResult {
  Signal x;
  RoundLog log;
  std::size_t max_agent_storage = 0;
};

/// filter(S) applied to register `x`, result in a new register.
RegHandle filter_in_network(Network& net, const MultiPoly& poly, const RegHandle& x);

/// Fixed number of quasi-Newton steps in the network; observer sees x^{(m)} after each step.
RegHandle inverse_in_network(Network& net, const MultiPoly& h, const MultiPoly& g, const RegHandle& y, int iterations,
                             const std::function<void(int, const Signal&)>& observer = {});

RunResult run_filter(const PolyFilter& f, const Signal& x, const NetworkOptions& options = {});
RunResult run_inverse(const PolyFilter& h, const PolyFilter& g, const Signal& y, int iterations,
                      const NetworkOptions& options = {},
                      const std::function<void(int, const Signal&)>& observer = {});

/// Part I inverse + post-filter, Part II rescale / Neumann / rescale. Global scalars are set up front.
RunResult run_wiener_mse(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {},
                         const NetworkOptions& options = {});
RunResult run_wiener_wmse(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {},
                          const NetworkOptions& options = {});
RunResult run_tikhonov(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {},
                       const NetworkOptions& options = {});

}  // namespace gsp::distsim
