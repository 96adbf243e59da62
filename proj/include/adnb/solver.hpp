#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "adnb/certify.hpp"
#include "adnb/instance.hpp"
#include "adnb/market.hpp"

namespace adnb {

struct SolveOptions {
  // Levels below 2 only verify the final answer, which always happens. 2 also
  // audits balance and bang-per-buck after every event. Negative: read
  // ADNB_CHECK_LEVEL, default 1.
  int check_level = -1;
  bool trace = false;
  bool record_prices = false;
};

int resolve_check_level(int requested);

// A block of buyers and goods frozen together during the feasibility stage.
struct FrozenBlock {
  std::vector<bool> buyers;
  std::vector<bool> goods;
  std::vector<Rational> prices;   // full vector at freeze time
};

struct SolverState {
  std::shared_ptr<const BargainingInstance> inst;   // preprocessed: no zero rows or columns
  MarketState market;                               // flexible money; active sets are B_c, G_c
  std::vector<bool> adaptable_buyers;               // B'
  std::vector<bool> adaptable_goods;                // G'
  std::vector<FrozenBlock> blocks;
  InstanceParams params;
  RunStats stats;
  int check_level = 1;
  bool trace = false;
  bool record_prices = false;

  const std::vector<Rational>& price() const { return market.price; }
  const SurplusVector& surplus() const { return market.balanced.surplus; }
};

// Unit-money Fisher prices, then flexible money and a balanced flow.
SolverState initialize(const BargainingInstance& inst, const SolveOptions& options = {});

struct FeasibilityOutcome {
  bool feasible = false;
  std::vector<Rational> prices;                 // feasible prices, or freeze-time prices
  std::optional<LPDualCertificate> lp;
  std::optional<ConvexDualCertificate> convex;
};

FeasibilityOutcome stage1(SolverState& state);

struct EdgeEvent {
  Rational x;
  std::vector<Edge> edges;
};

// Largest x < 1 at which lowering p_J makes some buyer of B_c - I want a good of J.
std::optional<EdgeEvent> stage1_event_x(const SolverState& state, const std::vector<bool>& I,
                                        const std::vector<bool>& J);

struct Solution {
  std::vector<Rational> p;
  Allocation x;
  std::vector<Rational> v;
};

// Expects feasible prices in the state (every beta < 0).
Solution stage2(SolverState& state);

struct BudgetReport {
  Integer maxflow_budget;     // n^4 g (log n + n log U + log C + g log mu), logs clamped at 2
  std::size_t maxflows = 0;
};

struct SolveResult {
  bool feasible = false;
  Solution solution;                            // feasible only; in original coordinates
  std::vector<Rational> feasible_prices;        // feasible only
  std::optional<LPDualCertificate> lp;          // infeasible only
  std::optional<ConvexDualCertificate> convex;  // infeasible only
  PreprocessReport report;
  InstanceParams params;
  BudgetReport budget;
  RunStats stats;
};

SolveResult solve(const BargainingInstance& inst, const SolveOptions& options = {});

struct RelaxedKktRow {
  Rational minus_beta;                 // -beta_i
  Rational v;                          // utility of the current allocation
  Rational min_residual;               // min_j p_j / (-beta_i) - u_ij / (v_i - c_i)
  bool equality_on_support = true;     // (4') on every positive allocation
};

struct RelaxedKktReport {
  bool meaningful = true;              // false once some beta_i >= 0
  std::vector<RelaxedKktRow> rows;
};

// Scaled KKT conditions at the state's current prices and balanced flow.
RelaxedKktReport relaxed_kkt_gap(const SolverState& state);

Integer maxflow_budget(const BargainingInstance& inst, const Integer& mu);

}  // namespace adnb
