#include "adnb/flownet.hpp"

#include <algorithm>
#include <deque>

namespace adnb {

BangPerBuck bang_per_buck(const UtilityMatrix& u, const std::vector<Rational>& p,
                          const std::vector<bool>& good_active) {
  BangPerBuck out;
  const std::size_t n = u.size();
  out.gamma.assign(n, Rational(0));
  out.best.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!good_active[j] || u[i][j] == 0) continue;
      Rational r = Rational(u[i][j]) / p[j];
      int order = out.best[i].empty() ? 1 : cmp(r, out.gamma[i]);
      if (order > 0) {
        out.gamma[i] = r;
        out.best[i].assign(1, j);
      } else if (order == 0) {
        out.best[i].push_back(j);
      }
    }
  }
  return out;
}

std::vector<Edge> bang_per_buck_edges(const BangPerBuck& bpb, const std::vector<bool>& buyer_active) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < bpb.best.size(); ++i) {
    if (!buyer_active[i]) continue;
    for (std::size_t j : bpb.best[i]) edges.push_back({j, i});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Rational> flexible_money(const std::vector<Rational>& c, const std::vector<Rational>& gamma) {
  std::vector<Rational> m(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    m[i] = gamma[i] > 0 ? 1 + c[i] / gamma[i] : Rational(1);
  }
  return m;
}

Rational EqNetwork::active_price_sum() const {
  Rational s = 0;
  for (std::size_t j = 0; j < g; ++j) {
    if (good_active[j]) s += price[j];
  }
  return s;
}

Rational EqNetwork::active_money_sum() const {
  Rational s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (buyer_active[i]) s += money[i];
  }
  return s;
}

EqNetwork build_network(const BargainingInstance& inst, const std::vector<Rational>& p, MoneyMode mode,
                        const std::optional<std::vector<Rational>>& money,
                        const std::optional<std::vector<Edge>>& edge_override) {
  EqNetwork net;
  net.n = inst.n();
  net.g = inst.g();
  net.mode = mode;
  if (p.size() != net.g) throw InputError("price vector length does not match the number of goods");
  for (const auto& pj : p) {
    if (pj <= 0) throw InputError("prices must be positive");
  }
  net.price = p;
  net.good_active.assign(net.g, true);
  net.buyer_active.assign(net.n, true);
  BangPerBuck bpb = bang_per_buck(inst.u, p, net.good_active);
  net.gamma = bpb.gamma;
  if (mode == MoneyMode::Flexible) {
    net.money = flexible_money(inst.c, bpb.gamma);
  } else {
    if (!money || money->size() != net.n) throw InputError("fixed-money network needs a money vector");
    net.money = *money;
  }
  if (edge_override) {
    net.edges = *edge_override;
    std::sort(net.edges.begin(), net.edges.end());
    net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
    for (const auto& e : net.edges) {
      if (e.good >= net.g || e.buyer >= net.n || inst.u[e.buyer][e.good] == 0) {
        throw InputError("edge override contains an edge without positive utility");
      }
    }
  } else {
    net.edges = bang_per_buck_edges(bpb, net.buyer_active);
  }
  return net;
}

Flow zero_flow(const EqNetwork& net) {
  Flow f;
  f.on_edge.assign(net.edges.size(), Rational(0));
  f.source.assign(net.g, Rational(0));
  f.sink.assign(net.n, Rational(0));
  f.value = 0;
  return f;
}

namespace {

// Integer Edmonds-Karp over the bipartite shape. Arcs are visited in insertion order.
class IntegerFlow {
 public:
  explicit IntegerFlow(std::size_t nodes) : adj_(nodes) {}

  std::size_t add(std::size_t from, std::size_t to, const Integer& cap, bool infinite) {
    std::size_t id = arcs_.size();
    arcs_.push_back({to, cap, 0, infinite});
    arcs_.push_back({from, 0, 0, false});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  Integer run(std::size_t s, std::size_t t) {
    Integer total = 0;
    std::vector<std::size_t> parent(adj_.size());
    std::vector<bool> seen(adj_.size());
    while (true) {
      std::fill(seen.begin(), seen.end(), false);
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t id : adj_[v]) {
          const Arc& a = arcs_[id];
          if (!seen[a.to] && residual(id) > 0) {
            seen[a.to] = true;
            parent[a.to] = id;
            queue.push_back(a.to);
          }
        }
      }
      if (!seen[t]) break;
      Integer push = -1;
      for (std::size_t v = t; v != s; v = arcs_[parent[v] ^ 1].to) {
        const Arc& a = arcs_[parent[v]];
        if (a.infinite) continue;
        Integer r = residual(parent[v]);
        if (push < 0 || r < push) push = r;
      }
      for (std::size_t v = t; v != s; v = arcs_[parent[v] ^ 1].to) {
        arcs_[parent[v]].flow += push;
        arcs_[parent[v] ^ 1].flow -= push;
      }
      total += push;
    }
    return total;
  }

  std::vector<bool> reachable(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        if (!seen[arcs_[id].to] && residual(id) > 0) {
          seen[arcs_[id].to] = true;
          queue.push_back(arcs_[id].to);
        }
      }
    }
    return seen;
  }

  const Integer& flow(std::size_t id) const { return arcs_[id].flow; }

 private:
  struct Arc {
    std::size_t to;
    Integer cap;
    Integer flow;
    bool infinite;
  };

  // Infinite arcs always have residual capacity; a unit stands in for it.
  Integer residual(std::size_t id) const {
    const Arc& a = arcs_[id];
    if (a.infinite) return 1;
    return a.cap - a.flow;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

}  // namespace

MaxFlowResult max_flow(const EqNetwork& net) {
  std::vector<Rational> caps;
  for (std::size_t j = 0; j < net.g; ++j) {
    if (net.good_active[j]) caps.push_back(net.price[j]);
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    if (net.buyer_active[i]) caps.push_back(net.money[i]);
  }
  const Integer scale = lcm_of_denominators(caps);
  auto scaled = [&scale](const Rational& r) {
    Rational s = r * Rational(scale);
    return Integer(s.get_num());
  };

  IntegerFlow graph(net.node_count());
  std::vector<std::size_t> src_arc(net.g, 0), sink_arc(net.n, 0), mid_arc(net.edges.size(), 0);
  for (std::size_t j = 0; j < net.g; ++j) {
    if (net.good_active[j]) src_arc[j] = graph.add(net.source(), net.good_node(j), scaled(net.price[j]), false);
  }
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const Edge& e = net.edges[k];
    mid_arc[k] = graph.add(net.good_node(e.good), net.buyer_node(e.buyer), 0, true);
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    if (net.buyer_active[i]) sink_arc[i] = graph.add(net.buyer_node(i), net.sink(), scaled(net.money[i]), false);
  }
  graph.run(net.source(), net.sink());

  MaxFlowResult out;
  out.flow = zero_flow(net);
  const Rational inv = Rational(1) / Rational(scale);
  for (std::size_t j = 0; j < net.g; ++j) {
    if (net.good_active[j]) out.flow.source[j] = Rational(graph.flow(src_arc[j])) * inv;
  }
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    out.flow.on_edge[k] = Rational(graph.flow(mid_arc[k])) * inv;
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    if (net.buyer_active[i]) out.flow.sink[i] = Rational(graph.flow(sink_arc[i])) * inv;
  }
  out.flow.value = 0;
  for (const auto& f : out.flow.source) out.flow.value += f;
  out.source_side = graph.reachable(net.source());
  return out;
}

bool is_feasible_flow(const EqNetwork& net, const Flow& flow) {
  if (flow.on_edge.size() != net.edges.size() || flow.source.size() != net.g || flow.sink.size() != net.n) {
    return false;
  }
  std::vector<Rational> into_buyer(net.n, Rational(0)), out_of_good(net.g, Rational(0));
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    if (flow.on_edge[k] < 0) return false;
    const Edge& e = net.edges[k];
    if (!net.good_active[e.good] || !net.buyer_active[e.buyer]) {
      if (flow.on_edge[k] != 0) return false;
    }
    out_of_good[e.good] += flow.on_edge[k];
    into_buyer[e.buyer] += flow.on_edge[k];
  }
  Rational value = 0;
  for (std::size_t j = 0; j < net.g; ++j) {
    const Rational cap = net.good_active[j] ? net.price[j] : Rational(0);
    if (flow.source[j] < 0 || flow.source[j] > cap || flow.source[j] != out_of_good[j]) return false;
    value += flow.source[j];
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    const Rational cap = net.buyer_active[i] ? net.money[i] : Rational(0);
    if (flow.sink[i] < 0 || flow.sink[i] > cap || flow.sink[i] != into_buyer[i]) return false;
  }
  return value == flow.value;
}

namespace {

std::vector<bool> residual_search(const EqNetwork& net, const Flow& flow,
                                  const std::vector<std::size_t>& seeds, bool forward) {
  // Adjacency of R(f) restricted to goods and buyers.
  std::vector<std::vector<std::size_t>> adj(net.node_count());
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const Edge& e = net.edges[k];
    if (!net.good_active[e.good] || !net.buyer_active[e.buyer]) continue;
    std::size_t gn = net.good_node(e.good), bn = net.buyer_node(e.buyer);
    if (forward) {
      adj[gn].push_back(bn);
      if (flow.on_edge[k] > 0) adj[bn].push_back(gn);
    } else {
      adj[bn].push_back(gn);
      if (flow.on_edge[k] > 0) adj[gn].push_back(bn);
    }
  }
  std::vector<bool> seen(net.node_count(), false);
  std::deque<std::size_t> queue;
  for (std::size_t v : seeds) {
    if (v == net.source() || v == net.sink() || seen[v]) continue;
    seen[v] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<bool> residual_reachable(const EqNetwork& net, const Flow& flow,
                                     const std::vector<std::size_t>& from) {
  return residual_search(net, flow, from, true);
}

std::vector<bool> residual_coreachable(const EqNetwork& net, const Flow& flow,
                                       const std::vector<std::size_t>& to) {
  return residual_search(net, flow, to, false);
}

bool source_cut_minimum(const EqNetwork& net, const Flow& max) {
  return max.value == net.active_price_sum();
}

bool sink_cut_minimum(const EqNetwork& net, const Flow& max) {
  return max.value == net.active_money_sum();
}

bool is_small(const BargainingInstance& inst, const std::vector<Rational>& p) {
  for (const auto& pj : p) {
    if (pj <= 0) return false;
  }
  EqNetwork net = build_network(inst, p, MoneyMode::Flexible);
  return source_cut_minimum(net, max_flow(net).flow);
}

}  // namespace adnb
