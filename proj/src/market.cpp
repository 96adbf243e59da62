#include "adnb/market.hpp"

#include <algorithm>

namespace adnb {

Rational sum(const std::vector<Rational>& v, const std::vector<bool>& mask) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (mask[i]) s += v[i];
  }
  return s;
}

Rational sum_squares(const std::vector<Rational>& v, const std::vector<bool>& mask) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (mask[i]) s += v[i] * v[i];
  }
  return s;
}

MarketState make_market(const UtilityMatrix& u, MoneyMode mode, std::vector<Rational> c_or_money,
                        std::vector<Rational> price) {
  MarketState st;
  st.u = &u;
  st.mode = mode;
  if (mode == MoneyMode::Flexible) {
    st.c = std::move(c_or_money);
  } else {
    st.fixed_money = std::move(c_or_money);
  }
  st.price = std::move(price);
  st.good_active.assign(st.price.size(), true);
  st.buyer_active.assign(u.size(), true);
  return st;
}

void rebuild(MarketState& st, std::vector<Edge> edges) {
  EqNetwork& net = st.net;
  net.n = st.n();
  net.g = st.g();
  net.mode = st.mode;
  net.price = st.price;
  net.good_active = st.good_active;
  net.buyer_active = st.buyer_active;
  net.gamma = bang_per_buck(*st.u, st.price, st.good_active).gamma;
  net.money = st.mode == MoneyMode::Flexible ? flexible_money(st.c, net.gamma) : st.fixed_money;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  net.edges = std::move(edges);
  st.balanced = BalancedFlow{};
  st.balanced.flow = zero_flow(net);
  st.balanced.surplus = surplus_of(net, st.balanced.flow);
}

void recompute_balanced(MarketState& st, RunStats& stats) {
  st.balanced = balanced_flow(st.net);
  stats.maxflows += st.balanced.maxflows;
}

void refresh(MarketState& st, RunStats& stats) {
  BangPerBuck bpb = bang_per_buck(*st.u, st.price, st.good_active);
  rebuild(st, bang_per_buck_edges(bpb, st.buyer_active));
  recompute_balanced(st, stats);
}

void prune_edges(MarketState& st, const std::vector<bool>& drop_goods, const std::vector<bool>& drop_to_buyers) {
  EqNetwork& net = st.net;
  Flow& flow = st.balanced.flow;
  std::vector<Edge> kept;
  std::vector<Rational> kept_flow;
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const Edge& e = net.edges[k];
    if (drop_goods[e.good] && drop_to_buyers[e.buyer]) {
      if (flow.on_edge[k] != 0) throw InternalError("pruned edge carries flow");
      continue;
    }
    kept.push_back(e);
    kept_flow.push_back(flow.on_edge[k]);
  }
  net.edges = std::move(kept);
  flow.on_edge = std::move(kept_flow);
}

std::vector<bool> goods_adjacent(const MarketState& st, const std::vector<bool>& buyers) {
  std::vector<bool> out(st.g(), false);
  for (const Edge& e : st.net.edges) {
    if (buyers[e.buyer] && st.good_active[e.good]) out[e.good] = true;
  }
  return out;
}

namespace {

std::vector<bool> complement(const std::vector<bool>& v, const std::vector<bool>& within) {
  std::vector<bool> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = within[k] && !v[k];
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

// min over nonempty S in J of m(Gamma(S)) / p(S) for the block (I, J), by
// Dinkelbach iterations on a parametric min cut. Returns the ratio and a minimizer.
std::pair<Rational, std::vector<bool>> tightest_subset(const MarketState& st, const std::vector<bool>& I,
                                                       const std::vector<bool>& J, RunStats& stats) {
  EqNetwork block = st.net;
  block.good_active = J;
  block.buyer_active = I;
  std::vector<bool> S = J;
  auto ratio = [&](const std::vector<bool>& goods) -> Rational {
    std::vector<bool> gamma(st.n(), false);
    for (const Edge& e : st.net.edges) {
      if (goods[e.good] && I[e.buyer]) gamma[e.buyer] = true;
    }
    return sum(st.net.money, gamma) / sum(st.price, goods);
  };
  Rational lambda = ratio(S);
  while (true) {
    for (std::size_t j = 0; j < st.g(); ++j) block.price[j] = st.price[j] * lambda;
    MaxFlowResult mf = max_flow(block);
    ++stats.maxflows;
    if (mf.flow.value == block.active_price_sum()) break;
    std::vector<bool> X(st.g(), false);
    for (std::size_t j = 0; j < st.g(); ++j) X[j] = J[j] && mf.source_side[block.good_node(j)];
    Rational next = ratio(X);
    if (next >= lambda) throw InternalError("tight-set search did not improve");
    lambda = next;
    S = X;
  }
  return {lambda, S};
}

void scale_prices(MarketState& st, const std::vector<bool>& J, const Rational& x) {
  for (std::size_t j = 0; j < st.g(); ++j) {
    if (J[j]) st.price[j] *= x;
  }
}

}  // namespace

void raise_prices(MarketState& st, const RaiseConfig& cfg, RunStats& stats) {
  const std::size_t n = st.n();
  const std::size_t g = st.g();
  const bool flexible = st.mode == MoneyMode::Flexible;
  std::map<std::size_t, Rational> last_tight;
  std::size_t phases_here = 0;
  std::size_t& phase_counter = stats.stage2_phases;
  const Rational n2 = Rational(Integer(static_cast<unsigned long>(n * n)));

  auto theta = [&]() -> const std::vector<Rational>& { return st.balanced.surplus.theta; };
  auto record = [&](std::size_t phase, std::size_t it, const Rational& x, const std::string& event) {
    if (cfg.trace) {
      stats.trace.push_back({cfg.stage, phase, it, x, event, sum(theta(), st.buyer_active),
                             sum_squares(theta(), st.buyer_active)});
    }
    if (cfg.record_prices) stats.price_history.push_back(st.price);
  };

  check_invariant(st, "at the start of the price-raising stage");
  while (true) {
    bool surplus_left = false;
    for (std::size_t i = 0; i < n; ++i) surplus_left |= st.buyer_active[i] && theta()[i] > 0;
    if (!surplus_left || phases_here >= cfg.max_phases) return;
    ++phases_here;
    ++phase_counter;
    if (phases_here > cfg.phase_cap) throw InternalError("phase cap exceeded in the price-raising stage");

    PhaseRecord rec;
    rec.stage = cfg.stage;
    rec.phase = phase_counter;
    rec.phi_start = sum_squares(theta(), st.buyer_active);
    rec.l1_start = sum(theta(), st.buyer_active);

    // Find sets
    Rational top = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.buyer_active[i] && theta()[i] > top) top = theta()[i];
    }
    std::vector<bool> I(n, false);
    for (std::size_t i = 0; i < n; ++i) I[i] = st.buyer_active[i] && theta()[i] == top;
    std::vector<bool> J = goods_adjacent(st, I);
    prune_edges(st, J, complement(I, st.buyer_active));

    std::size_t it = 0;
    while (true) {
      ++it;
      if (cfg.check_level >= 2) {
        // every buyer outside I keeps an edge from a good outside J
        for (std::size_t i = 0; i < n; ++i) {
          if (!st.buyer_active[i] || I[i] || st.balanced.flow.sink[i] == 0) continue;
          bool ok = false;
          for (const Edge& e : st.net.edges) ok |= e.buyer == i && !J[e.good];
          if (!ok) {
            ++stats.violations.neighbour;
            stats.note("stage " + cfg.stage + ": buyer outside I without an edge from G - J");
          }
        }
      }

      // next new edge: smallest x > 1 at which some j outside J joins S_i, i in I
      std::optional<Rational> x_edge;
      for (std::size_t i = 0; i < n; ++i) {
        if (!I[i]) continue;
        const Rational& gamma = st.net.gamma[i];
        for (std::size_t j = 0; j < g; ++j) {
          if (!st.good_active[j] || J[j] || (*st.u)[i][j] == 0) continue;
          Rational x = gamma * st.price[j] / Rational((*st.u)[i][j]);
          if (!x_edge || x < *x_edge) x_edge = x;
        }
      }
      if (x_edge && *x_edge < 1) throw InternalError("new-edge factor below 1 while raising prices");

      Rational x_tight;
      std::vector<bool> S(g, false);
      if (flexible) {
        std::vector<bool> T(n, false);
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
          if (!I[i]) continue;
          if (theta()[i] >= 1) throw InternalError("stage II reached a buyer with surplus >= 1");
          Rational b = 1 / (1 - theta()[i]);
          if (first || b < x_tight) {
            x_tight = b;
            std::fill(T.begin(), T.end(), false);
            first = false;
          }
          if (b == x_tight) T[i] = true;
        }
        for (std::size_t k = 0; k < st.net.edges.size(); ++k) {
          const Edge& e = st.net.edges[k];
          if (T[e.buyer] && st.balanced.flow.on_edge[k] > 0) S[e.good] = true;
        }
      } else {
        auto [ratio, subset] = tightest_subset(st, I, J, stats);
        x_tight = ratio;
        S = subset;
      }

      if (!x_edge || x_tight <= *x_edge) {
        scale_prices(st, J, x_tight);
        refresh(st, stats);
        check_invariant(st, "after a tight event");
        if (cfg.check_level >= 2) check_property1(st, "after a tight event");

        // S must be tight at the new prices.
        std::vector<bool> gamma_s(n, false);
        for (const Edge& e : st.net.edges) {
          if (S[e.good]) gamma_s[e.buyer] = true;
        }
        if (sum(st.price, S) != sum(st.net.money, gamma_s)) {
          ++stats.violations.tight_set;
          stats.note("stage " + cfg.stage + ": expected tight set is not tight");
        }
        if (flexible && cfg.delta) {
          const Rational& delta = *cfg.delta;
          for (std::size_t j = 0; j < g; ++j) {
            if (!S[j]) continue;
            if (Rational(st.price[j].get_den()) > delta) {
              ++stats.violations.denominator;
              stats.note("tight price " + to_string(st.price[j]) + " has denominator above Delta = " +
                         to_string(delta));
            }
            auto prev = last_tight.find(j);
            if (prev != last_tight.end() && delta > 0 && st.price[j] - prev->second < 1 / (delta * delta)) {
              ++stats.violations.tight_increase;
              stats.note("repeated tight good raised by less than 1/Delta^2");
            }
            last_tight[j] = st.price[j];
          }
        }
        record(rec.phase, it, x_tight, "tight");
        break;
      }

      // new edge event
      const Rational x = *x_edge;
      scale_prices(st, J, x);
      std::vector<Edge> edges = st.net.edges;
      BangPerBuck bpb = bang_per_buck(*st.u, st.price, st.good_active);
      for (std::size_t i = 0; i < n; ++i) {
        if (!I[i]) continue;
        for (std::size_t j : bpb.best[i]) {
          if (!J[j]) edges.push_back({j, i});
        }
      }
      rebuild(st, edges);
      if (cfg.check_level >= 2) {
        std::vector<Edge> full = bang_per_buck_edges(bpb, st.buyer_active);
        for (const Edge& e : st.net.edges) {
          if (!std::binary_search(full.begin(), full.end(), e)) {
            throw InternalError("network edge is not a bang-per-buck edge after raising prices");
          }
        }
      }
      recompute_balanced(st, stats);
      check_invariant(st, "after a new edge");
      if (cfg.check_level >= 2) check_property1(st, "after a new edge");

      // Update sets: buyers with residual paths into I join I.
      std::vector<std::size_t> seeds;
      for (std::size_t i = 0; i < n; ++i) {
        if (I[i]) seeds.push_back(st.net.buyer_node(i));
      }
      std::vector<bool> reach = residual_coreachable(st.net, st.balanced.flow, seeds);
      for (std::size_t i = 0; i < n; ++i) {
        if (st.buyer_active[i] && reach[st.net.buyer_node(i)]) I[i] = true;
      }
      J = goods_adjacent(st, I);
      prune_edges(st, J, complement(I, st.buyer_active));
      record(rec.phase, it, x, "edge");
    }

    rec.iterations = it;
    rec.phi_end = sum_squares(theta(), st.buyer_active);
    rec.l1_end = sum(theta(), st.buyer_active);
    rec.end_event = "tight";
    stats.stage2_iterations += it;
    stats.max_stage2_phase_iterations = std::max(stats.max_stage2_phase_iterations, it);
    if (it > g) {
      ++stats.violations.stage2_iterations;
      stats.note("stage " + cfg.stage + " phase " + std::to_string(rec.phase) + " used " +
                 std::to_string(it) + " iterations");
    }
    if (rec.phi_end > rec.phi_start * (1 - 1 / n2)) {
      ++stats.violations.stage2_potential;
      stats.note("stage " + cfg.stage + " phase " + std::to_string(rec.phase) + ": potential " +
                 to_string(rec.phi_start) + " -> " + to_string(rec.phi_end));
    }
    stats.phases.push_back(rec);
  }
}

}  // namespace adnb
