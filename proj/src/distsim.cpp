#include "gsp/distsim.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace gsp::distsim {

std::size_t RoundLog::total_messages() const {
  std::size_t s = 0;
  for (const auto& r : records) s += r.messages;
  return s;
}

std::size_t RoundLog::max_agent_storage() const {
  std::size_t s = 0;
  for (const auto& r : records) s = std::max(s, r.max_agent_storage);
  return s;
}

void RoundLog::write_csv(std::ostream& out) const {
  out << "# schema=v1\nround,messages,max_agent_storage\n";
  for (const auto& r : records) out << r.round << ',' << r.messages << ',' << r.max_agent_storage << '\n';
}

std::size_t AccessTracer::non_neighbor_reads(const Graph& g) const {
  std::size_t bad = 0;
  for (const auto& [reader, sender] : reads) bad += reader != sender && !g.has_edge(reader, sender);
  return bad;
}

double Agent::constant(const std::string& name, std::size_t index) const {
  const auto it = constants.find(name);
  if (it == constants.end() || index >= it->second.size()) {
    throw validation_error("agent " + std::to_string(id) + ": constant '" + name + "' not configured");
  }
  return it->second[index];
}

std::size_t Agent::storage() const {
  std::size_t s = registers.size();
  for (const auto& row : rows) s += row.size();
  for (const auto& [name, values] : constants) s += values.size();
  for (const auto& m : inbox) s += m.values.size();
  return s;
}

Network::Network(std::vector<Shift> shifts, NetworkOptions options) : options_(options) {
  if (shifts.empty()) throw validation_error("network: at least one shift required");
  graph_ = shifts.front().graph();
  for (const auto& s : shifts) {
    if (s.graph() != graph_) throw validation_error("network: shifts must share one graph");
  }
  dim_ = shifts.size();
  agents_.resize(graph_->order());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    Agent& a = agents_[i];
    a.id = i;
    const auto nb = graph_->neighbors(i);
    a.neighbors.assign(nb.begin(), nb.end());
    a.inbox.resize(nb.size());
    for (const auto& s : shifts) {
      std::vector<double> row{s.diagonal(i)};
      const auto off = s.off_diagonal(i);
      row.insert(row.end(), off.begin(), off.end());
      a.rows.push_back(std::move(row));
    }
  }
}

Reg Network::alloc() {
  ++live_;
  if (!free_.empty()) {
    const Reg r = free_.back();
    free_.pop_back();
    return r;
  }
  const Reg r = agents_.front().registers.size();
  for (auto& a : agents_) a.registers.push_back(0.0);
  return r;
}

void Network::release(Reg r) {
  --live_;
  free_.push_back(r);
}

void Network::load(Reg r, const Signal& x) {
  if (x.size() != static_cast<Eigen::Index>(order())) throw validation_error("network: signal length mismatch");
  for (auto& a : agents_) a.reg(r) = x[static_cast<Eigen::Index>(a.id)];
}

Signal Network::gather(Reg r) const {
  Signal x(static_cast<Eigen::Index>(order()));
  for (const auto& a : agents_) x[static_cast<Eigen::Index>(a.id)] = a.reg(r);
  return x;
}

void Network::set_local_constant(const std::string& name, const Eigen::VectorXd& values) {
  if (values.size() != static_cast<Eigen::Index>(order())) throw validation_error("network: constant length mismatch");
  for (auto& a : agents_) a.constants[name] = {values[static_cast<Eigen::Index>(a.id)]};
}

void Network::broadcast(const std::string& name, std::vector<double> values) {
  for (auto& a : agents_) a.constants[name] = values;
}

std::vector<std::size_t> Network::visit_order() const {
  std::vector<std::size_t> order(agents_.size());
  std::iota(order.begin(), order.end(), 0);
  if (options_.order_seed) {
    std::seed_seq seq{*options_.order_seed, static_cast<std::uint64_t>(log_.rounds())};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

void Network::local(const std::function<void(Agent&)>& op) {
  for (std::size_t i : visit_order()) op(agents_[i]);
}

void Network::shift_round(std::size_t k, std::span<const Reg> in, std::span<const Reg> out) {
  if (k >= dim_) throw validation_error("network: shift index out of range");
  if (in.size() != out.size()) throw validation_error("network: round needs one output per input");
  for (Reg o : out) {
    if (std::find(in.begin(), in.end(), o) != in.end()) throw validation_error("network: round output aliases an input");
  }
  if (log_.rounds() >= options_.round_budget) throw validation_error("network: round budget exceeded");
  const std::vector<std::size_t> order = visit_order();

  // Send: agent i writes its registers into the slot reserved for i in each neighbor's inbox.
  std::size_t messages = 0;
  for (std::size_t i : order) {
    const Agent& a = agents_[i];
    for (std::size_t j : a.neighbors) {
      Agent& b = agents_[j];
      const auto slot = static_cast<std::size_t>(
          std::lower_bound(b.neighbors.begin(), b.neighbors.end(), i) - b.neighbors.begin());
      Message& m = b.inbox[slot];
      m.src = i;
      m.values.resize(std::max(m.values.size(), in.size()));
      for (std::size_t c = 0; c < in.size(); ++c) m.values[c] = a.reg(in[c]);
      ++messages;
    }
  }

  // Receive: own row and inbox only; neighbor sums in ascending neighbor order.
  for (std::size_t i : order) {
    Agent& a = agents_[i];
    const std::vector<double>& row = a.rows[k];
    if (options_.tracer) {
      for (const Message& m : a.inbox) options_.tracer->reads.emplace_back(a.id, m.src);
    }
    for (std::size_t c = 0; c < in.size(); ++c) {
      double acc = row[0] * a.reg(in[c]);
      for (std::size_t s = 0; s < a.inbox.size(); ++s) acc += row[1 + s] * a.inbox[s].values[c];
      a.reg(out[c]) = acc;
    }
  }

  log_.records.push_back({log_.rounds() + 1, messages, max_agent_storage()});
  if (options_.snapshots) {
    std::ostream& os = *options_.snapshots;
    for (const auto& a : agents_) {
      os << "round=" << log_.rounds() << " agent=" << a.id << " regs=";
      for (std::size_t r = 0; r < a.registers.size(); ++r) os << (r ? "," : "") << a.registers[r];
      os << '\n';
    }
  }
}

std::size_t Network::max_agent_storage() const {
  std::size_t s = 0;
  for (const auto& a : agents_) s = std::max(s, a.storage());
  return s;
}

RegHandle DistBackend::copy(const Vec& v) {
  Vec out = fresh();
  const Reg src = v.id(), dst = out.id();
  net_.local([&](Agent& a) { a.reg(dst) = a.reg(src); });
  return out;
}

RegHandle DistBackend::zeros_like(const Vec&) {
  Vec out = fresh();
  const Reg dst = out.id();
  net_.local([&](Agent& a) { a.reg(dst) = 0.0; });
  return out;
}

void DistBackend::axpy(double alpha, const Vec& x, Vec& y) {
  const Reg xs = x.id(), ys = y.id();
  net_.local([&](Agent& a) { a.reg(ys) += alpha * a.reg(xs); });
}

void DistBackend::scale(Vec& v, double alpha) {
  const Reg r = v.id();
  net_.local([&](Agent& a) { a.reg(r) *= alpha; });
}

std::vector<RegHandle> DistBackend::shift_round(std::size_t k, std::span<const Vec* const> xs) {
  std::vector<Vec> out;
  std::vector<Reg> in_ids, out_ids;
  for (const Vec* x : xs) {
    in_ids.push_back(x->id());
    out.push_back(fresh());
    out_ids.push_back(out.back().id());
  }
  net_.shift_round(k, in_ids, out_ids);
  return out;
}

namespace {

// Coefficients are configuration: every agent stores them; the schedule reads the same values.
void configure(Network& net, const std::string& name, const MultiPoly& poly) {
  net.broadcast(name, std::vector<double>(poly.coeffs().begin(), poly.coeffs().end()));
}

RegHandle input(Network& net, const Signal& x) {
  RegHandle r(&net, net.alloc());
  net.load(r.id(), x);
  return r;
}

RunResult finish(const Network& net, const RegHandle& out) {
  return {net.gather(out.id()), net.log(), std::max(net.log().max_agent_storage(), net.max_agent_storage())};
}

struct NeumannPlan {
  double a = 0.0;
  double b = 0.0;
  int iterations = 0;
};

// Same constants as the centralized Neumann iteration; computed offline and broadcast.
NeumannPlan neumann_setup(Network& net, const WienerProblem& prob, const WienerConfig& config) {
  const double pmin = prob.p_min();
  if (!(pmin > 0.0)) throw validation_error("neumann: p_min must be positive");
  const double K = std::max(0.0, prob.k_sup());
  NeumannPlan plan;
  plan.a = pmin / (K + pmin);
  plan.b = K / (K + pmin);
  plan.iterations = neumann_iteration_count(plan.b, config.neumann_rtol, config.neumann_iterations);
  net.set_local_constant("p_sqrt", prob.p.array().sqrt().matrix());
  net.set_local_constant("p_inv_sqrt", prob.p.array().rsqrt().matrix());
  net.broadcast("neumann", {plan.a, plan.b});
  configure(net, "k", prob.k);
  return plan;
}

// z2 -> z3 = (I + P^{-1/2} K P^{-1/2})^{-1} z2, then x = P^{-1/2} z3.
RegHandle neumann_in_network(Network& net, const WienerProblem& prob, const NeumannPlan& plan, const RegHandle& z2) {
  DistBackend b(net);
  RegHandle z = b.copy(z2);
  for (int m = 0; m < plan.iterations; ++m) {
    RegHandle scaled = b.copy(z);
    const Reg s = scaled.id();
    net.local([&](Agent& a) { a.reg(s) *= a.constant("p_inv_sqrt"); });
    RegHandle kz = filter_in_network(net, prob.k, scaled);
    const Reg kr = kz.id(), zr = z.id(), w0 = z2.id();
    net.local([&](Agent& a) {
      const double aw = a.constant("p_inv_sqrt") * a.reg(kr);
      a.reg(zr) = plan.a * a.reg(w0) + plan.b * a.reg(zr) - plan.a * aw;
    });
  }
  const Reg zr = z.id();
  net.local([&](Agent& a) { a.reg(zr) /= a.constant("p_sqrt"); });
  return z;
}

RegHandle rescale_by_sqrt_p(Network& net, const RegHandle& w) {
  DistBackend b(net);
  RegHandle z2 = b.copy(w);
  const Reg r = z2.id();
  net.local([&](Agent& a) { a.reg(r) = a.constant("p_sqrt") * a.reg(r); });
  return z2;
}

MultiPoly approximant(const WienerProblem& prob, const MultiPoly& denom, const ApproxSpec& solver) {
  return inverse_filter(prob.filter(denom), solver).poly();
}

}  // namespace

RegHandle filter_in_network(Network& net, const MultiPoly& poly, const RegHandle& x) {
  if (poly.dim() != net.dim()) throw validation_error("network: polynomial dimension does not match the shifts");
  DistBackend b(net);
  return apply_schedule(b, poly, x);
}

RegHandle inverse_in_network(Network& net, const MultiPoly& h, const MultiPoly& g, const RegHandle& y, int iterations,
                             const std::function<void(int, const Signal&)>& observer) {
  DistBackend b(net);
  RegHandle x = b.zeros_like(y);
  RegHandle e = b.copy(y);
  b.scale(e, -1.0);
  for (int m = 1; m <= iterations; ++m) {
    RegHandle ge = filter_in_network(net, g, e);
    b.axpy(-1.0, ge, x);
    RegHandle hx = filter_in_network(net, h, x);
    b.axpy(-1.0, y, hx);
    e = std::move(hx);
    if (observer) observer(m, net.gather(x.id()));
  }
  return x;
}

RunResult run_filter(const PolyFilter& f, const Signal& x, const NetworkOptions& options) {
  Network net(f.shifts(), options);
  configure(net, "h", f.poly());
  RegHandle in = input(net, x);
  RegHandle out = filter_in_network(net, f.poly(), in);
  return finish(net, out);
}

RunResult run_inverse(const PolyFilter& h, const PolyFilter& g, const Signal& y, int iterations,
                      const NetworkOptions& options, const std::function<void(int, const Signal&)>& observer) {
  if (iterations < 0) throw validation_error("run_inverse: iterations must be nonnegative");
  Network net(h.shifts(), options);
  configure(net, "h", h.poly());
  configure(net, "g", g.poly());
  RegHandle in = input(net, y);
  RegHandle out = inverse_in_network(net, h.poly(), g.poly(), in, iterations, observer);
  return finish(net, out);
}

RunResult run_wiener_mse(const WienerProblem& prob, const Signal& y, const WienerConfig& config,
                         const NetworkOptions& options) {
  prob.validate(WienerMode::stochastic);
  Network net(prob.spectrum->shifts, options);
  const MultiPoly denom = prob.h * prob.h * prob.r + prob.g;
  const MultiPoly post = prob.h * prob.r;
  const MultiPoly gm = approximant(prob, denom, config.solver);
  configure(net, "h2r+g", denom);
  configure(net, "hr", post);
  configure(net, "g_M", gm);
  const NeumannPlan plan = neumann_setup(net, prob, config);

  RegHandle in = input(net, y);
  RegHandle z1 = inverse_in_network(net, denom, gm, in, config.inverse_iterations);
  RegHandle w = filter_in_network(net, post, z1);
  if (plan.iterations == 0) return finish(net, w);
  RegHandle z2 = rescale_by_sqrt_p(net, w);
  RegHandle x = neumann_in_network(net, prob, plan, z2);
  return finish(net, x);
}

RunResult run_wiener_wmse(const WienerProblem& prob, const Signal& y, const WienerConfig& config,
                          const NetworkOptions& options) {
  prob.validate(WienerMode::worstcase);
  Network net(prob.spectrum->shifts, options);
  const double d2 = *prob.delta0 * *prob.delta0;
  const MultiPoly denom = d2 * (prob.h * prob.h) + prob.g;
  const MultiPoly gm = approximant(prob, denom, config.solver);
  configure(net, "d2h2+g", denom);
  configure(net, "h", prob.h);
  configure(net, "g_M", gm);
  net.broadcast("delta0^2", {d2});

  RegHandle in = input(net, y);
  RegHandle z = inverse_in_network(net, denom, gm, in, config.inverse_iterations);
  RegHandle x = filter_in_network(net, prob.h, z);
  DistBackend(net).scale(x, d2);
  return finish(net, x);
}

RunResult run_tikhonov(const WienerProblem& prob, const Signal& y, const WienerConfig& config,
                       const NetworkOptions& options) {
  Network net(prob.spectrum->shifts, options);
  const NeumannPlan plan = neumann_setup(net, prob, config);
  RegHandle in = input(net, y);
  RegHandle z2 = rescale_by_sqrt_p(net, in);
  RegHandle x = neumann_in_network(net, prob, plan, z2);
  return finish(net, x);
}

}  // namespace gsp::distsim
