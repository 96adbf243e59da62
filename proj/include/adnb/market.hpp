#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adnb/balanced.hpp"
#include "adnb/flownet.hpp"

namespace adnb {

struct TraceRecord {
  std::string stage;      // "I", "II" or "fisher"
  std::size_t phase = 0;
  std::size_t iteration = 0;
  Rational x;
  std::string event;      // "edge", "tight", "freeze", "feasible", "infeasible", ...
  Rational l1;            // sum of theta (stage I: sum of beta^2 over negative betas is l2)
  Rational l2;
};

struct PhaseRecord {
  std::string stage;
  std::size_t phase = 0;
  std::size_t iterations = 0;
  Rational phi_start;
  Rational phi_end;
  Rational l1_start;
  Rational l1_end;
  std::string end_event;
};

// Counters for the runtime checks against the known worst-case bounds. None of these abort a run.
struct Violations {
  std::size_t stage1_potential = 0;
  std::size_t stage2_potential = 0;
  std::size_t stage1_iterations = 0;
  std::size_t stage2_iterations = 0;
  std::size_t denominator = 0;
  std::size_t tight_increase = 0;
  std::size_t tight_set = 0;
  std::size_t neighbour = 0;
  std::size_t maxflow_budget = 0;

  std::size_t total() const {
    return stage1_potential + stage2_potential + stage1_iterations + stage2_iterations + denominator +
           tight_increase + tight_set + neighbour + maxflow_budget;
  }
};

struct RunStats {
  std::size_t stage1_phases = 0;
  std::size_t stage2_phases = 0;
  std::size_t stage1_iterations = 0;
  std::size_t stage2_iterations = 0;
  std::size_t max_stage1_phase_iterations = 0;
  std::size_t max_stage2_phase_iterations = 0;
  std::size_t maxflows = 0;
  std::size_t restore_fallbacks = 0;
  Violations violations;
  std::vector<std::string> notes;           // first few violation details
  std::vector<PhaseRecord> phases;
  std::vector<TraceRecord> trace;
  std::vector<std::vector<Rational>> price_history;

  void note(std::string text) {
    if (notes.size() < 32) notes.push_back(std::move(text));
  }
};

// Prices, money rule and the current (possibly pruned) equality network.
struct MarketState {
  const UtilityMatrix* u = nullptr;
  MoneyMode mode = MoneyMode::Flexible;
  std::vector<Rational> c;            // flexible mode
  std::vector<Rational> fixed_money;  // fixed mode
  std::vector<Rational> price;
  std::vector<bool> good_active;
  std::vector<bool> buyer_active;
  EqNetwork net;
  BalancedFlow balanced;

  std::size_t n() const { return u->size(); }
  std::size_t g() const { return price.size(); }
};

MarketState make_market(const UtilityMatrix& u, MoneyMode mode, std::vector<Rational> c_or_money,
                        std::vector<Rational> price);

// Rebuilds the network with the given edges at the current prices. Flow is reset.
void rebuild(MarketState& st, std::vector<Edge> edges);

// Full bang-per-buck edge set among active nodes, then a balanced flow.
void refresh(MarketState& st, RunStats& stats);

void recompute_balanced(MarketState& st, RunStats& stats);

// Removes edges matching `drop`; they must carry no flow.
void prune_edges(MarketState& st, const std::vector<bool>& drop_goods, const std::vector<bool>& drop_to_buyers);

std::vector<bool> goods_adjacent(const MarketState& st, const std::vector<bool>& buyers);

struct RaiseConfig {
  std::string stage = "II";
  int check_level = 1;
  bool trace = false;
  bool record_prices = false;
  std::optional<Rational> delta;   // denominator bound for tight prices
  std::size_t phase_cap = std::numeric_limits<std::size_t>::max();
  std::size_t max_phases = std::numeric_limits<std::size_t>::max();
};

// Price-raising phases: I = argmax surplus, J = Gamma(I), raise p_J until a new
// edge appears or a subset of J goes tight. Stops when every surplus is 0 or
// after max_phases phases. Expects st.balanced to be current.
void raise_prices(MarketState& st, const RaiseConfig& cfg, RunStats& stats);

Rational sum(const std::vector<Rational>& v, const std::vector<bool>& mask);
Rational sum_squares(const std::vector<Rational>& v, const std::vector<bool>& mask);

}  // namespace adnb
