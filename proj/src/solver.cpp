#include "adnb/solver.hpp"

#include <algorithm>
#include <cstdlib>

#include "adnb/fisher.hpp"

namespace adnb {

namespace {

using Mask = std::vector<bool>;

Rational q(std::size_t k) {
  return Rational(Integer(static_cast<unsigned long>(k)));
}

std::size_t log_clamped(const Rational& value) {
  return std::max<std::size_t>(2, value > 0 ? ceil_log2(value) : 0);
}

bool any(const Mask& m) {
  return std::find(m.begin(), m.end(), true) != m.end();
}

Mask minus(const Mask& a, const Mask& b) {
  Mask out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && !b[k];
  return out;
}

void check_invariant(const MarketState& st, const char* where) {
  if (st.balanced.flow.value != st.net.active_price_sum()) {
    throw InternalError(std::string("invariant lost: source cut is not minimum ") + where);
  }
}

void check_property1(const MarketState& st, const char* where) {
  if (verify_property1(st.net, st.balanced.flow) != Property1Status::Holds) {
    throw InternalError(std::string("balanced flow has a residual path to a higher surplus ") + where);
  }
}

// Goods adjacent to `buyers` in the current network.
Mask gamma_of(const MarketState& st, const Mask& buyers) {
  Mask out(st.g(), false);
  for (const Edge& e : st.net.edges) {
    if (buyers[e.buyer] && st.good_active[e.good]) out[e.good] = true;
  }
  return out;
}

// J = Gamma(I) - Gamma(B_c - I)
Mask exclusive_goods(const MarketState& st, const Mask& I) {
  return minus(gamma_of(st, I), gamma_of(st, minus(st.buyer_active, I)));
}

bool desire(const SolverState& s, const Mask& I, const Mask& J) {
  const MarketState& st = s.market;
  for (std::size_t i = 0; i < st.n(); ++i) {
    if (!st.buyer_active[i] || I[i]) continue;
    for (std::size_t j = 0; j < st.g(); ++j) {
      if (J[j] && (*st.u)[i][j] > 0) return true;
    }
  }
  return false;
}

Rational stage1_potential(const MarketState& st) {
  Rational phi = 0;
  for (std::size_t i = 0; i < st.n(); ++i) {
    const Rational& b = st.balanced.surplus.beta[i];
    if (st.buyer_active[i] && b < 0) phi += b * b;
  }
  return phi;
}

std::size_t stage1_phase_cap(const SolverState& s) {
  const std::size_t n = s.market.n(), g = s.market.g();
  std::size_t bits = 2 * n * log_clamped(Rational(s.params.U)) + 2 * g * log_clamped(Rational(s.params.mu));
  return 4 * (n * n * g * bits) + n + 1;
}

std::size_t stage2_phase_cap(const SolverState& s) {
  const std::size_t n = s.market.n();
  Rational d = s.params.Delta;
  Rational d4 = d * d * d * d * q(n);
  return 4 * (n * n * log_clamped(d4)) + n + 1;
}

void record_stage1(SolverState& s, std::size_t phase, std::size_t it, const Rational& x, const std::string& event) {
  if (s.trace) {
    const MarketState& st = s.market;
    s.stats.trace.push_back({"I", phase, it, x, event, sum(st.balanced.surplus.beta, st.buyer_active),
                             stage1_potential(st)});
  }
  if (s.record_prices) s.stats.price_history.push_back(s.market.price);
}

// Frozen blocks may lose their bang-per-buck edges once the goods they used
// to compete for got cheaper. Lowering each block's prices until its buyers
// strictly prefer their own goods separates the blocks again; scaling a block
// by y < 1 multiplies its 1-surpluses by y, so they stay negative.
void separate_blocks(SolverState& s) {
  MarketState& st = s.market;
  const UtilityMatrix& u = *st.u;
  for (std::size_t k = s.blocks.size(); k-- > 0;) {
    const FrozenBlock& block = s.blocks[k];
    std::optional<Rational> worst;
    for (std::size_t i = 0; i < st.n(); ++i) {
      if (!block.buyers[i]) continue;
      Rational own = 0, other = 0;
      for (std::size_t j = 0; j < st.g(); ++j) {
        if (u[i][j] == 0) continue;
        Rational r = Rational(u[i][j]) / st.price[j];
        Rational& slot = block.goods[j] ? own : other;
        if (r > slot) slot = r;
      }
      if (other == 0) continue;
      Rational ratio = own / other;
      if (!worst || ratio < *worst) worst = ratio;
    }
    if (!worst || *worst > 1) continue;
    Rational y = *worst / 2;
    for (std::size_t j = 0; j < st.g(); ++j) {
      if (block.goods[j]) st.price[j] *= y;
    }
  }
}

bool all_beta_negative(const MarketState& st) {
  for (std::size_t i = 0; i < st.n(); ++i) {
    if (st.buyer_active[i] && st.balanced.surplus.beta[i] >= 0) return false;
  }
  return true;
}

void restore(SolverState& s) {
  MarketState& st = s.market;
  st.buyer_active.assign(st.n(), true);
  st.good_active.assign(st.g(), true);
  refresh(st, s.stats);
  if (st.balanced.flow.value == st.net.active_price_sum() && all_beta_negative(st)) return;

  ++s.stats.restore_fallbacks;
  s.stats.note("restoring frozen prices broke feasibility; separating frozen blocks");
  separate_blocks(s);
  refresh(st, s.stats);
  check_invariant(st, "after restoring frozen blocks");
  if (!all_beta_negative(st)) throw InternalError("restored prices are not feasible");
}

FeasibilityOutcome infeasible_outcome(SolverState& s) {
  MarketState& st = s.market;
  const BargainingInstance& inst = *s.inst;
  const std::size_t n = st.n(), g = st.g();
  FeasibilityOutcome out;
  out.prices = st.price;

  // LP dual at prices with G' zeroed; B_c buyers never want G'.
  BangPerBuck bpb = bang_per_buck(inst.u, st.price, st.good_active);
  Rational mu = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!st.buyer_active[i]) continue;
    if (bpb.gamma[i] == 0) throw InternalError("active buyer without goods at the end of stage I");
    mu += 1 / bpb.gamma[i];
  }
  LPDualCertificate lp;
  lp.y.assign(n, Rational(0));
  lp.z.assign(g, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (st.buyer_active[i]) lp.y[i] = 1 / (mu * bpb.gamma[i]);
  }
  for (std::size_t j = 0; j < g; ++j) {
    if (st.good_active[j]) lp.z[j] = st.price[j] / mu;
  }
  out.lp = lp;

  ConvexDualCertificate convex;
  convex.buyers = s.adaptable_buyers;
  convex.goods = s.adaptable_goods;
  convex.p = st.price;
  out.convex = convex;
  return out;
}

}  // namespace

int resolve_check_level(int requested) {
  if (requested >= 0) return requested;
  if (const char* env = std::getenv("ADNB_CHECK_LEVEL")) {
    int level = std::atoi(env);
    if (level >= 0) return level;
  }
  return 1;
}

Integer maxflow_budget(const BargainingInstance& inst, const Integer& mu) {
  InstanceParams params = compute_params(inst, mu);
  const std::size_t n = inst.n(), g = inst.g();
  std::size_t logs = log_clamped(q(n)) + n * log_clamped(Rational(params.U)) + log_clamped(params.C) +
                     g * log_clamped(Rational(mu));
  Integer n4 = Integer(static_cast<unsigned long>(n));
  n4 = n4 * n4 * n4 * n4;
  return n4 * Integer(static_cast<unsigned long>(g)) * Integer(static_cast<unsigned long>(logs));
}

SolverState initialize(const BargainingInstance& inst, const SolveOptions& options) {
  validate(inst);
  Preprocessed pre = preprocess(inst);
  if (!pre.report.empty()) throw InputError("initialize needs an instance without zero rows or columns");

  SolverState s;
  s.inst = std::make_shared<const BargainingInstance>(inst);
  s.check_level = resolve_check_level(options.check_level);
  s.trace = options.trace;
  s.record_prices = options.record_prices;

  FisherOptions fopt;
  fopt.check_level = s.check_level;
  FisherResult fisher = fisher_equilibrium({inst.u, std::vector<Rational>(inst.n(), Rational(1))}, fopt);
  s.stats.maxflows += fisher.stats.maxflows;

  Integer mu = lcm_of_denominators(fisher.p);
  s.params = compute_params(inst, mu);
  s.market = make_market(s.inst->u, MoneyMode::Flexible, inst.c, fisher.p);
  refresh(s.market, s.stats);
  check_invariant(s.market, "after initialization");
  s.adaptable_buyers.assign(inst.n(), false);
  s.adaptable_goods.assign(inst.g(), false);
  return s;
}

std::optional<EdgeEvent> stage1_event_x(const SolverState& s, const Mask& I, const Mask& J) {
  const MarketState& st = s.market;
  std::optional<EdgeEvent> best;
  for (std::size_t i = 0; i < st.n(); ++i) {
    if (!st.buyer_active[i] || I[i]) continue;
    const Rational& gamma = st.net.gamma[i];
    for (std::size_t j = 0; j < st.g(); ++j) {
      if (!J[j] || (*st.u)[i][j] == 0) continue;
      Rational x = Rational((*st.u)[i][j]) / (st.price[j] * gamma);
      if (x >= 1) throw InternalError("outside buyer already wants a good of J");
      if (!best || x > best->x) {
        best = EdgeEvent{x, {{j, i}}};
      } else if (x == best->x) {
        best->edges.push_back({j, i});
      }
    }
  }
  return best;
}

FeasibilityOutcome stage1(SolverState& s) {
  MarketState& st = s.market;
  RunStats& stats = s.stats;
  const std::size_t n = st.n(), g = st.g();
  const std::size_t cap = stage1_phase_cap(s);
  const std::size_t iteration_cap = 4 * n * g + 4;
  const Rational shrink = 1 - 1 / (q(n) * q(n) * q(g));
  std::size_t phases = 0;

  while (true) {
    if (!any(st.buyer_active)) break;
    if (sum(st.balanced.surplus.beta, st.buyer_active) >= 0) {
      FeasibilityOutcome out = infeasible_outcome(s);
      record_stage1(s, phases, 0, 1, "infeasible");
      return out;
    }
    if (all_beta_negative(st)) break;

    ++phases;
    ++stats.stage1_phases;
    if (phases > cap) throw InternalError("phase cap exceeded in stage I");
    if (phases > 1) {
      refresh(st, stats);
      check_invariant(st, "at a stage I phase start");
      // The refresh can settle the question on its own.
      if (sum(st.balanced.surplus.beta, st.buyer_active) >= 0 || all_beta_negative(st)) {
        --phases;
        --stats.stage1_phases;
        continue;
      }
    }

    PhaseRecord rec;
    rec.stage = "I";
    rec.phase = stats.stage1_phases;
    rec.phi_start = stage1_potential(st);
    rec.l1_start = sum(st.balanced.surplus.beta, st.buyer_active);

    Rational low = 0;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!st.buyer_active[i]) continue;
      if (first || st.balanced.surplus.beta[i] < low) low = st.balanced.surplus.beta[i];
      first = false;
    }
    Mask I(n, false);
    for (std::size_t i = 0; i < n; ++i) I[i] = st.buyer_active[i] && st.balanced.surplus.beta[i] == low;
    Mask J = exclusive_goods(st, I);
    prune_edges(st, minus(st.good_active, J), I);

    auto small_surplus = [&] {
      for (std::size_t i = 0; i < n; ++i) {
        if (I[i] && st.balanced.surplus.beta[i] >= 0) return false;
      }
      return true;
    };

    std::size_t it = 0;
    while (desire(s, I, J) && small_surplus()) {
      ++it;
      if (it > iteration_cap) throw InternalError("iteration cap exceeded in stage I");
      if (s.check_level >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!I[i]) continue;
          bool ok = false;
          for (const Edge& e : st.net.edges) ok |= e.buyer == i && J[e.good];
          if (!ok) {
            ++stats.violations.neighbour;
            stats.note("stage I: buyer in I without an edge from J");
          }
        }
      }

      std::optional<EdgeEvent> event = stage1_event_x(s, I, J);
      if (!event) throw InternalError("stage I: desire without a candidate edge");
      for (std::size_t j = 0; j < g; ++j) {
        if (J[j]) st.price[j] *= event->x;
      }
      std::vector<Edge> edges = st.net.edges;
      edges.insert(edges.end(), event->edges.begin(), event->edges.end());
      rebuild(st, edges);
      if (s.check_level >= 2) {
        BangPerBuck bpb = bang_per_buck(*st.u, st.price, st.good_active);
        std::vector<Edge> full = bang_per_buck_edges(bpb, st.buyer_active);
        for (const Edge& e : st.net.edges) {
          if (!std::binary_search(full.begin(), full.end(), e)) {
            throw InternalError("network edge is not a bang-per-buck edge in stage I");
          }
        }
      }
      recompute_balanced(st, stats);
      check_invariant(st, "after a stage I edge event");
      if (s.check_level >= 2) check_property1(st, "after a stage I edge event");

      std::vector<std::size_t> seeds;
      for (std::size_t i = 0; i < n; ++i) {
        if (I[i]) seeds.push_back(st.net.buyer_node(i));
      }
      Mask reach = residual_reachable(st.net, st.balanced.flow, seeds);
      for (std::size_t i = 0; i < n; ++i) {
        if (st.buyer_active[i] && reach[st.net.buyer_node(i)]) I[i] = true;
      }
      J = exclusive_goods(st, I);
      prune_edges(st, minus(st.good_active, J), I);
      record_stage1(s, rec.phase, it, event->x, "edge");
    }

    rec.end_event = "surplus";
    if (!desire(s, I, J)) {
      // A block whose buyers are not all short of money stays active; freezing
      // it would break the negative 1-surplus property of adaptable buyers.
      if (!small_surplus()) {
        stats.note("stage I: isolated block with a nonnegative 1-surplus was left active");
      } else {
        if (!any(J)) throw InternalError("stage I: freezing a block without goods");
        FrozenBlock block{I, J, st.price};
        for (std::size_t i = 0; i < n; ++i) {
          if (I[i]) {
            st.buyer_active[i] = false;
            s.adaptable_buyers[i] = true;
          }
        }
        for (std::size_t j = 0; j < g; ++j) {
          if (J[j]) {
            st.good_active[j] = false;
            s.adaptable_goods[j] = true;
          }
        }
        st.net.buyer_active = st.buyer_active;
        st.net.good_active = st.good_active;
        s.blocks.push_back(std::move(block));
        rec.end_event = "freeze";
        record_stage1(s, rec.phase, it, 1, "freeze");
      }
    }

    rec.iterations = it;
    rec.phi_end = stage1_potential(st);
    rec.l1_end = sum(st.balanced.surplus.beta, st.buyer_active);
    stats.stage1_iterations += it;
    stats.max_stage1_phase_iterations = std::max(stats.max_stage1_phase_iterations, it);
    if (it > n * g) {
      ++stats.violations.stage1_iterations;
      stats.note("stage I phase " + std::to_string(rec.phase) + " used " + std::to_string(it) + " iterations");
    }
    if (rec.phi_end > rec.phi_start * shrink) {
      ++stats.violations.stage1_potential;
      stats.note("stage I phase " + std::to_string(rec.phase) + ": potential " + to_string(rec.phi_start) +
                 " -> " + to_string(rec.phi_end));
    }
    stats.phases.push_back(rec);
  }

  restore(s);
  record_stage1(s, phases, 0, 1, "feasible");
  FeasibilityOutcome out;
  out.feasible = true;
  out.prices = st.price;
  return out;
}

Solution stage2(SolverState& s) {
  MarketState& st = s.market;
  if (!all_beta_negative(st)) throw InputError("stage II needs feasible prices");
  RaiseConfig cfg;
  cfg.stage = "II";
  cfg.check_level = s.check_level;
  cfg.trace = s.trace;
  cfg.record_prices = s.record_prices;
  cfg.delta = s.params.Delta;
  cfg.phase_cap = stage2_phase_cap(s);
  raise_prices(st, cfg, s.stats);

  if (st.balanced.flow.value != st.net.active_price_sum() || st.balanced.flow.value != st.net.active_money_sum()) {
    throw InternalError("stage II ended without clearing the market");
  }
  Solution sol;
  sol.p = st.price;
  sol.x = allocation_from_flow(st.net, st.balanced.flow);
  sol.v.assign(st.n(), Rational(0));
  for (std::size_t i = 0; i < st.n(); ++i) {
    for (std::size_t j = 0; j < st.g(); ++j) sol.v[i] += Rational((*st.u)[i][j]) * sol.x[i][j];
  }
  return sol;
}

RelaxedKktReport relaxed_kkt_gap(const SolverState& s) {
  const MarketState& st = s.market;
  RelaxedKktReport report;
  Allocation x = allocation_from_flow(st.net, st.balanced.flow);
  for (std::size_t i = 0; i < st.n(); ++i) {
    RelaxedKktRow row;
    row.minus_beta = -st.balanced.surplus.beta[i];
    for (std::size_t j = 0; j < st.g(); ++j) row.v += Rational((*st.u)[i][j]) * x[i][j];
    Rational gain = row.v - s.inst->c[i];
    if (row.minus_beta <= 0 || gain <= 0) {
      report.meaningful = false;
      report.rows.push_back(row);
      continue;
    }
    bool first = true;
    for (std::size_t j = 0; j < st.g(); ++j) {
      if (!st.good_active[j]) continue;
      Rational lhs = st.price[j] / row.minus_beta;
      Rational rhs = Rational((*st.u)[i][j]) / gain;
      Rational residual = lhs - rhs;
      if (first || residual < row.min_residual) row.min_residual = residual;
      first = false;
      if (x[i][j] > 0 && residual != 0) row.equality_on_support = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

SolveResult solve(const BargainingInstance& inst, const SolveOptions& options) {
  validate(inst);
  const std::size_t n = inst.n(), g = inst.g();
  SolveResult result;

  std::vector<std::size_t> zero_buyers;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::all_of(inst.u[i].begin(), inst.u[i].end(), [](const Integer& x) { return x == 0; })) {
      zero_buyers.push_back(i);
    }
  }
  if (!zero_buyers.empty()) {
    // A buyer who wants nothing can never beat c_i >= 0.
    result.report.zero_buyers = zero_buyers;
    for (std::size_t j = 0; j < g; ++j) {
      bool wanted = false;
      for (std::size_t i = 0; i < n; ++i) wanted |= inst.u[i][j] > 0;
      if (!wanted) result.report.removed_goods.push_back(j);
    }
    result.params = compute_params(inst);
    LPDualCertificate lp{std::vector<Rational>(n, Rational(0)), std::vector<Rational>(g, Rational(0))};
    lp.y[zero_buyers.front()] = 1;
    ConvexDualCertificate convex{std::vector<bool>(n, true), std::vector<bool>(g, true),
                                 std::vector<Rational>(g, Rational(1))};
    convex.buyers[zero_buyers.front()] = false;
    if (!verify_lp_dual(inst, lp) || !verify_convex_dual(inst, convex)) {
      throw InternalError("certificate for a buyer without wanted goods failed its check");
    }
    result.lp = lp;
    result.convex = convex;
    result.budget.maxflow_budget = maxflow_budget(inst, 1);
    return result;
  }

  Preprocessed pre = preprocess(inst);
  result.report = pre.report;
  SolverState state = initialize(pre.instance, options);
  result.params = compute_params(inst, state.params.mu);
  FeasibilityOutcome outcome = stage1(state);

  auto lift = [&](const std::vector<Rational>& reduced, const Rational& fill) {
    std::vector<Rational> full(g, fill);
    for (std::size_t k = 0; k < pre.kept_goods.size(); ++k) full[pre.kept_goods[k]] = reduced[k];
    return full;
  };

  if (!outcome.feasible) {
    LPDualCertificate lp{outcome.lp->y, lift(outcome.lp->z, 0)};
    ConvexDualCertificate convex;
    convex.buyers = outcome.convex->buyers;
    convex.goods.assign(g, true);   // unwanted goods can sit in the split
    for (std::size_t k = 0; k < pre.kept_goods.size(); ++k) convex.goods[pre.kept_goods[k]] = outcome.convex->goods[k];
    convex.p = lift(outcome.convex->p, 1);
    if (!verify_lp_dual(inst, lp)) throw InternalError("LP dual certificate failed its check");
    if (!verify_convex_dual(inst, convex)) throw InternalError("convex dual certificate failed its check");
    result.lp = lp;
    result.convex = convex;
  } else {
    if (!check_feasibility_witness(pre.instance, outcome.prices)) {
      throw InternalError("stage I returned prices that are not feasible");
    }
    result.feasible = true;
    result.feasible_prices = lift(outcome.prices, 0);
    Solution reduced = stage2(state);
    result.solution.p = lift(reduced.p, 0);
    result.solution.v = reduced.v;
    result.solution.x.assign(n, std::vector<Rational>(g, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < pre.kept_goods.size(); ++k) result.solution.x[i][pre.kept_goods[k]] = reduced.x[i][k];
    }
    std::string why;
    if (!check_kkt(inst, result.solution.p, result.solution.x, &why)) {
      throw InternalError("solution fails the KKT check: " + why);
    }
    EquilibriumCheck eq = check_equilibrium(inst, result.solution.p);
    if (!eq.ok) throw InternalError("solution prices fail the equilibrium test: " + eq.reason);
  }

  result.stats = std::move(state.stats);
  result.budget.maxflow_budget = maxflow_budget(inst, state.params.mu);
  result.budget.maxflows = result.stats.maxflows;
  if (Integer(static_cast<unsigned long>(result.stats.maxflows)) > 4 * result.budget.maxflow_budget) {
    ++result.stats.violations.maxflow_budget;
    result.stats.note("max-flow count " + std::to_string(result.stats.maxflows) + " exceeds 4x the budget");
  }
  return result;
}

}  // namespace adnb
