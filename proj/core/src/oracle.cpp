#include "tpra/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tpra {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

bool in(const std::vector<std::uint8_t>& set, std::size_t s) { return set[s] != 0; }

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t index) {
  // splitmix64 step, so neighbouring seeds give unrelated instances
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FiniteInstance random_instance(std::uint64_t seed, const InstanceLimits& limits) {
  std::mt19937_64 rng(seed);
  const std::size_t n = uniform_index(rng, 2, std::max<std::size_t>(2, limits.max_states));
  const std::size_t m = uniform_index(rng, 1, std::max<std::size_t>(1, limits.max_inputs));
  std::vector<std::vector<std::vector<StateId>>> succ(n, std::vector<std::vector<StateId>>(m));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t u = 0; u < m; ++u) {
      const std::size_t k = uniform_index(rng, 1, std::min(limits.max_successors, n));
      auto& list = succ[s][u];
      while (list.size() < k) {
        const auto t = static_cast<StateId>(uniform_index(rng, 0, n - 1));
        if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(t);
      }
    }
  }
  FiniteInstance inst;
  inst.system = FiniteSystem(succ);
  const auto graph = inst.system.graph();
  inst.edge_costs.resize(graph.successors.size());
  std::bernoulli_distribution infinite(limits.infinite_edge_probability);
  for (auto& c : inst.edge_costs) {
    c = infinite(rng) ? ExtCost::infinity() : ExtCost(0.5 * static_cast<double>(uniform_index(rng, 1, 20)));
  }
  auto pick_set = [&](double density) {
    std::vector<std::uint8_t> set(n, 0);
    std::bernoulli_distribution member(density);
    for (auto& b : set) b = member(rng) ? 1 : 0;
    set[uniform_index(rng, 0, n - 1)] = 1;
    return set;
  };
  inst.first_target = pick_set(0.1);
  inst.second_target = pick_set(0.1);
  inst.terminal.resize(n);
  for (auto& c : inst.terminal) c = ExtCost(0.5 * static_cast<double>(uniform_index(rng, 0, 10)));
  return inst;
}

FiniteInstance phase_coupled_gadget() {
  // s0 -u0-> s1 (A1, cost 1) -> s3 (10) -> s5 (10)
  // s0 -u1-> s2 (A1, cost 2) -> s4 (1)  -> s5 (1);  s5 in A2, self-loop
  const std::vector<std::vector<std::vector<StateId>>> succ{
      {{1}, {2}}, {{3}, {3}}, {{4}, {4}}, {{5}, {5}}, {{5}, {5}}, {{5}, {5}}};
  FiniteInstance inst;
  inst.system = FiniteSystem(succ);
  const std::vector<double> costs{1, 2, 10, 10, 1, 1, 10, 10, 1, 1, 1, 1};
  for (double c : costs) inst.edge_costs.emplace_back(c);
  inst.first_target = {0, 1, 1, 0, 0, 0};
  inst.second_target = {0, 0, 0, 0, 0, 1};
  inst.terminal.assign(6, ExtCost::zero());
  return inst;
}

std::string FiniteInstance::describe() const {
  std::ostringstream os;
  const auto g = system.graph();
  os << "states " << g.state_count << ", inputs " << g.input_count << "\n";
  for (StateId s = 0; s < g.state_count; ++s) {
    os << "s" << s << (first_target[s] ? " A1" : "") << (second_target[s] ? " A2" : "");
    if (second_target[s]) os << " G0=" << terminal[s];
    os << ":";
    for (InputId u = 0; u < g.input_count; ++u) {
      os << " u" << u << "{";
      const std::size_t p = g.pair_index(s, u);
      for (std::uint64_t k = g.offsets[p]; k < g.offsets[p + 1]; ++k) {
        os << (k == g.offsets[p] ? "" : ",") << g.successors[k] << ":" << edge_costs[k];
      }
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

IterationResult value_iteration(const ReachAvoidProblem& prob, std::size_t max_sweeps) {
  prob.validate();
  const auto& G = prob.graph;
  IterationResult r;
  r.values = prob.stop_cost;
  auto& V = r.values;
  while (r.sweeps < max_sweeps) {
    ++r.sweeps;
    bool changed = false;
    for (StateId s = 0; s < G.state_count; ++s) {
      ExtCost best = prob.stop_cost[s];
      for (InputId u = 0; u < G.input_count; ++u) {
        ExtCost worst = ExtCost::zero();
        for (StateId t : G.successors_of(s, u)) worst = max(worst, (*prob.running)(s, u, t) + V[t]);
        best = min(best, worst);
      }
      if (best != V[s]) {
        V[s] = best;
        changed = true;
      }
    }
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  return r;
}

IterationResult product_value(const TransitionGraph& graph, const RunningCost& running,
                              const std::vector<std::uint8_t>& first_target,
                              const std::vector<std::uint8_t>& second_target,
                              const std::vector<ExtCost>& terminal, std::size_t max_sweeps) {
  const std::size_t n = graph.state_count;
  auto stop = [&](std::size_t s, int b) {
    return b == 1 && in(second_target, s) ? terminal[s] : ExtCost::infinity();
  };
  IterationResult r;
  r.values.resize(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (int b = 0; b < 2; ++b) r.values[2 * s + b] = stop(s, b);
  }
  auto& V = r.values;
  while (r.sweeps < max_sweeps) {
    ++r.sweeps;
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      for (int b = 0; b < 2; ++b) {
        ExtCost best = stop(s, b);
        for (InputId u = 0; u < graph.input_count; ++u) {
          ExtCost worst = ExtCost::zero();
          for (StateId t : graph.successors_of(s, u)) {
            const int bt = (b == 1 || in(first_target, t)) ? 1 : 0;
            worst = max(worst, running(s, u, t) + V[2 * t + bt]);
          }
          best = min(best, worst);
        }
        if (best != V[2 * s + b]) {
          V[2 * s + b] = best;
          changed = true;
        }
      }
    }
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  return r;
}

std::vector<ExtCost> product_initial_values(const IterationResult& product,
                                            const std::vector<std::uint8_t>& first_target) {
  std::vector<ExtCost> out(first_target.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = product.values[2 * s + (first_target[s] ? 1 : 0)];
  return out;
}

IterationResult evaluate_phased_controller(const TransitionGraph& graph, const RunningCost& running,
                                           const PhasedController& ctrl,
                                           const std::vector<std::uint8_t>& first_target,
                                           const std::vector<std::uint8_t>& second_target,
                                           const std::vector<ExtCost>& terminal,
                                           std::size_t max_sweeps) {
  if (ctrl.stage_count() != 2) throw std::invalid_argument("evaluate_phased_controller: two stages expected");
  const std::size_t n = graph.state_count;
  // Entry (s, k, b) at 4 s + 2 k + b; value of deciding at s in phase k.
  auto index = [](std::size_t s, std::size_t k, int b) { return 4 * s + 2 * k + static_cast<std::size_t>(b); };
  IterationResult r;
  r.values.assign(4 * n, ExtCost::infinity());
  auto& W = r.values;
  while (r.sweeps < max_sweeps) {
    ++r.sweeps;
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      for (std::size_t k0 = 0; k0 < 2; ++k0) {
        for (int b = 0; b < 2; ++b) {
          std::size_t k = k0;
          ExtCost w = ExtCost::infinity();
          while (k < 2 && ctrl.stage(k).is_defined(s) && ctrl.stage(k).is_stop(s)) ++k;
          if (k == 2) {
            if (b == 1 && in(second_target, s)) w = terminal[s];
          } else if (ctrl.stage(k).is_defined(s)) {
            const InputId u = ctrl.stage(k).input(s);
            w = ExtCost::zero();
            for (StateId t : graph.successors_of(s, u)) {
              const int bt = (b == 1 || in(first_target, t)) ? 1 : 0;
              w = max(w, running(s, u, t) + W[index(t, k, bt)]);
            }
          }
          if (w != W[index(s, k0, b)]) {
            W[index(s, k0, b)] = w;
            changed = true;
          }
        }
      }
    }
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  std::vector<ExtCost> initial(n);
  for (std::size_t s = 0; s < n; ++s) initial[s] = W[index(s, 0, first_target[s] ? 1 : 0)];
  r.values = std::move(initial);
  return r;
}

namespace {

std::optional<std::string> check_instance(const FiniteInstance& inst, bool mutate,
                                          SelftestReport& report) {
  const auto graph = inst.system.graph();
  const EdgeCostTable g = inst.costs();
  const TwoPhaseProblem prob{graph, &g, inst.first_target, inst.second_target, inst.terminal};

  auto fail = [&](const std::string& what) { return what + "\n" + inst.describe(); };

  const auto product = product_value(graph, g, inst.first_target, inst.second_target, inst.terminal);
  if (!product.converged) return fail("product value iteration did not converge");
  const auto expected = product_initial_values(product, inst.first_target);

  const auto composed = mutate ? synthesize_naive(prob) : synthesize(prob);
  const auto naive = synthesize_naive(prob);
  if (!composed.ok()) {
    ++report.no_solution;
    for (std::size_t s = 0; s < expected.size(); ++s) {
      if (expected[s].is_finite()) {
        std::ostringstream os;
        os << "no solution reported but oracle value at s" << s << " is " << expected[s];
        return fail(os.str());
      }
    }
    return std::nullopt;
  }

  const auto& ctrl = *composed.controller;
  const auto realized = evaluate_phased_controller(graph, g, ctrl, inst.first_target,
                                                   inst.second_target, inst.terminal);
  const auto naive_cost = evaluate_phased_controller(graph, g, *naive.controller, inst.first_target,
                                                     inst.second_target, inst.terminal);
  if (!realized.converged || !naive_cost.converged) return fail("controller evaluation did not converge");
  bool strictly_worse = false;
  for (std::size_t s = 0; s < expected.size(); ++s) {
    std::ostringstream os;
    if (ctrl.value(0)[s] != expected[s]) {
      os << "composed value V1(s" << s << ") = " << ctrl.value(0)[s] << ", oracle " << expected[s];
      return fail(os.str());
    }
    if (realized.values[s] != expected[s]) {
      os << "composed controller realizes " << realized.values[s] << " at s" << s << ", oracle "
         << expected[s];
      return fail(os.str());
    }
    if (naive_cost.values[s] < expected[s]) {
      ++report.naive_better;
      os << "naive controller cost " << naive_cost.values[s] << " below optimum " << expected[s]
         << " at s" << s;
      return fail(os.str());
    }
    if (naive_cost.values[s] > expected[s]) strictly_worse = true;
    if (naive.controller->value(0)[s] != naive_cost.values[s]) {
      os << "naive worst case reported as " << naive.controller->value(0)[s] << ", oracle "
         << naive_cost.values[s] << " at s" << s;
      return fail(os.str());
    }
  }
  if (strictly_worse) ++report.naive_strictly_worse;

  // Stage-wise checks against Gauss-Seidel and the Bellman equation.
  for (std::size_t k = 0; k < 2; ++k) {
    ReachAvoidProblem stage{graph, &g, {}};
    if (k == 1) {
      stage.stop_cost = stop_cost_on(inst.second_target, inst.terminal);
    } else {
      stage.stop_cost.assign(graph.state_count, ExtCost::infinity());
      for (std::size_t s = 0; s < graph.state_count; ++s) {
        if (inst.first_target[s] && composed.stage_values[1][s].is_finite()) {
          stage.stop_cost[s] = mutate ? ExtCost::zero() : composed.stage_values[1][s];
        }
      }
    }
    const auto vi = value_iteration(stage);
    if (!vi.converged) return fail("stage value iteration did not converge");
    if (vi.values != composed.stage_values[k].values) {
      return fail("Dijkstra and Gauss-Seidel disagree on stage " + std::to_string(k + 1));
    }
    if (!verify_fixed_point(stage, composed.stage_values[k])) {
      return fail("fixed-point check failed on stage " + std::to_string(k + 1));
    }
  }
  return std::nullopt;
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  for (std::size_t i = 0; i < options.instances; ++i) {
    const std::uint64_t seed = instance_seed(options.seed, i);
    const auto inst = random_instance(seed, options.limits);
    ++report.instances;
    if (auto err = check_instance(inst, options.mutate, report)) {
      report.counterexample = "instance " + std::to_string(i) + " (seed " + std::to_string(seed) +
                              "): " + *err;
      break;
    }
    ++report.passed;
  }
  return report;
}

}  // namespace tpra
