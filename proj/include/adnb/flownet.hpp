#pragma once

#include <optional>
#include <vector>

#include "adnb/instance.hpp"
#include "adnb/rational.hpp"

namespace adnb {

enum class MoneyMode { Flexible, Fixed };

struct Edge {
  std::size_t good;
  std::size_t buyer;
  auto operator<=>(const Edge&) const = default;
};

struct BangPerBuck {
  std::vector<Rational> gamma;                 // 0 for a buyer with no active good it likes
  std::vector<std::vector<std::size_t>> best;  // S_i
};

// gamma_i = max_j u_ij / p_j over goods with good_active[j] (p_j > 0 required there).
BangPerBuck bang_per_buck(const UtilityMatrix& u, const std::vector<Rational>& p,
                          const std::vector<bool>& good_active);

// All edges (j, i) with j in S_i, for active buyers, in sorted order.
std::vector<Edge> bang_per_buck_edges(const BangPerBuck& bpb, const std::vector<bool>& buyer_active);

// m_i = 1 + c_i / gamma_i, or 1 when gamma_i is 0 (buyer without goods).
std::vector<Rational> flexible_money(const std::vector<Rational>& c, const std::vector<Rational>& gamma);

struct EqNetwork {
  std::size_t n = 0;
  std::size_t g = 0;
  MoneyMode mode = MoneyMode::Flexible;
  std::vector<Rational> price;   // capacity of (s, j)
  std::vector<Rational> money;   // capacity of (i, t)
  std::vector<Rational> gamma;
  std::vector<bool> good_active;
  std::vector<bool> buyer_active;
  std::vector<Edge> edges;       // sorted, unique

  // s = 0, goods 1..g, buyers g+1..g+n, t = g+n+1
  std::size_t source() const { return 0; }
  std::size_t good_node(std::size_t j) const { return 1 + j; }
  std::size_t buyer_node(std::size_t i) const { return 1 + g + i; }
  std::size_t sink() const { return 1 + g + n; }
  std::size_t node_count() const { return 2 + g + n; }

  Rational active_price_sum() const;
  Rational active_money_sum() const;
};

EqNetwork build_network(const BargainingInstance& inst, const std::vector<Rational>& p, MoneyMode mode,
                        const std::optional<std::vector<Rational>>& money = std::nullopt,
                        const std::optional<std::vector<Edge>>& edge_override = std::nullopt);

struct Flow {
  std::vector<Rational> on_edge;  // parallel to EqNetwork::edges
  std::vector<Rational> source;   // per good
  std::vector<Rational> sink;     // per buyer
  Rational value;
};

Flow zero_flow(const EqNetwork& net);

struct MaxFlowResult {
  Flow flow;
  std::vector<bool> source_side;  // per node, reachable from s in the residual graph
};

MaxFlowResult max_flow(const EqNetwork& net);

// Conservation and capacity check.
bool is_feasible_flow(const EqNetwork& net, const Flow& flow);

// Residual reachability inside R(f) - {s, t}. Nodes are network node ids.
std::vector<bool> residual_reachable(const EqNetwork& net, const Flow& flow,
                                     const std::vector<std::size_t>& from);

// Nodes that can reach `to` inside R(f) - {s, t}.
std::vector<bool> residual_coreachable(const EqNetwork& net, const Flow& flow,
                                       const std::vector<std::size_t>& to);

bool source_cut_minimum(const EqNetwork& net, const Flow& max);
bool sink_cut_minimum(const EqNetwork& net, const Flow& max);

// Positive prices whose source cut is minimum in N(p).
bool is_small(const BargainingInstance& inst, const std::vector<Rational>& p);

}  // namespace adnb
