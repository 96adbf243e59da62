#include "adnb/balanced.hpp"

namespace adnb {

SurplusVector surplus_of(const EqNetwork& net, const Flow& flow) {
  SurplusVector s;
  s.active = net.buyer_active;
  s.theta.assign(net.n, Rational(0));
  s.beta.assign(net.n, Rational(-1));
  for (std::size_t i = 0; i < net.n; ++i) {
    if (!net.buyer_active[i]) continue;
    s.theta[i] = net.money[i] - flow.sink[i];
    s.beta[i] = s.theta[i] - 1;
  }
  return s;
}

namespace {

void accumulate(Flow& total, const Flow& part) {
  for (std::size_t k = 0; k < total.on_edge.size(); ++k) total.on_edge[k] += part.on_edge[k];
  for (std::size_t j = 0; j < total.source.size(); ++j) total.source[j] += part.source[j];
  for (std::size_t i = 0; i < total.sink.size(); ++i) total.sink[i] += part.sink[i];
  total.value += part.value;
}

// Goods of `goods` adjacent to some buyer of `buyers`.
std::vector<bool> neighbours(const EqNetwork& net, const std::vector<bool>& buyers,
                             const std::vector<bool>& goods) {
  std::vector<bool> out(net.g, false);
  for (const Edge& e : net.edges) {
    if (buyers[e.buyer] && goods[e.good]) out[e.good] = true;
  }
  return out;
}

Rational density(const EqNetwork& net, const std::vector<bool>& buyers, const std::vector<bool>& goods) {
  Rational num = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (buyers[i]) {
      num += net.money[i];
      ++count;
    }
  }
  std::vector<bool> gamma = neighbours(net, buyers, goods);
  for (std::size_t j = 0; j < net.g; ++j) {
    if (gamma[j]) num -= net.price[j];
  }
  return num / Rational(Integer(static_cast<unsigned long>(count)));
}

bool any(const std::vector<bool>& v) {
  for (bool b : v) {
    if (b) return true;
  }
  return false;
}

}  // namespace

// Peels off buyer groups in decreasing order of surplus. The top level is the
// maximum over buyer sets R of (m(R) - p(Gamma(R))) / |R|, found by a Newton
// iteration whose test is one max-flow with sink capacities m_i - level.
BalancedFlow balanced_flow(const EqNetwork& net) {
  BalancedFlow out;
  out.flow = zero_flow(net);
  std::vector<bool> buyers = net.buyer_active;
  std::vector<bool> goods = net.good_active;

  while (any(buyers)) {
    Rational level = density(net, buyers, goods);
    if (level < 0) level = 0;
    std::vector<bool> top = buyers;

    EqNetwork sub = net;
    sub.buyer_active = buyers;
    sub.good_active = goods;
    MaxFlowResult mf;
    while (true) {
      Rational capacity = 0;
      for (std::size_t i = 0; i < net.n; ++i) {
        sub.money[i] = net.money[i] > level ? net.money[i] - level : Rational(0);
        if (buyers[i]) capacity += sub.money[i];
      }
      mf = max_flow(sub);
      ++out.maxflows;
      if (mf.flow.value == capacity) break;
      for (std::size_t i = 0; i < net.n; ++i) {
        top[i] = buyers[i] && !mf.source_side[net.buyer_node(i)] && net.money[i] > level;
      }
      Rational next = density(net, top, goods);
      if (next <= level) throw InternalError("balanced flow: density did not increase");
      level = next;
    }

    if (level == 0) {
      // Every remaining buyer can spend all of its money.
      accumulate(out.flow, mf.flow);
      break;
    }

    std::vector<bool> top_goods = neighbours(net, top, goods);
    EqNetwork block = net;
    block.buyer_active = top;
    block.good_active = top_goods;
    Rational need = 0;
    for (std::size_t i = 0; i < net.n; ++i) {
      block.money[i] = top[i] ? net.money[i] - level : Rational(0);
      if (top[i]) need += block.money[i];
    }
    MaxFlowResult part = max_flow(block);
    ++out.maxflows;
    if (part.flow.value != need || part.flow.value != block.active_price_sum()) {
      throw InternalError("balanced flow: top group is not saturated");
    }
    accumulate(out.flow, part.flow);
    for (std::size_t i = 0; i < net.n; ++i) {
      if (top[i]) buyers[i] = false;
    }
    for (std::size_t j = 0; j < net.g; ++j) {
      if (top_goods[j]) goods[j] = false;
    }
  }
  out.surplus = surplus_of(net, out.flow);
  return out;
}

Property1Status verify_property1(const EqNetwork& net, const Flow& flow) {
  if (!is_feasible_flow(net, flow)) return Property1Status::NotMaximum;
  if (flow.value != max_flow(net).flow.value) return Property1Status::NotMaximum;
  SurplusVector s = surplus_of(net, flow);
  for (std::size_t i = 0; i < net.n; ++i) {
    if (!net.buyer_active[i]) continue;
    std::vector<bool> reach = residual_reachable(net, flow, {net.buyer_node(i)});
    for (std::size_t k = 0; k < net.n; ++k) {
      if (net.buyer_active[k] && reach[net.buyer_node(k)] && s.theta[i] < s.theta[k]) {
        return Property1Status::Violated;
      }
    }
  }
  return Property1Status::Holds;
}

BalancedFlow scale_flow(const BalancedFlow& balanced, const Rational& x) {
  if (x <= 0) throw InputError("scale factor must be positive");
  const SurplusVector& s = balanced.surplus;
  for (std::size_t i = 0; i < s.beta.size(); ++i) {
    if (s.active[i] && s.beta[i] < 0 && x * s.beta[i] < -1) {
      throw InputError("scale factor " + to_string(x) + " exceeds the admissible range");
    }
  }
  BalancedFlow out = balanced;
  out.maxflows = 0;
  for (auto& f : out.flow.on_edge) f *= x;
  for (auto& f : out.flow.source) f *= x;
  for (auto& f : out.flow.sink) f *= x;
  out.flow.value *= x;
  for (std::size_t i = 0; i < s.beta.size(); ++i) {
    if (!s.active[i]) continue;
    out.surplus.beta[i] = x * s.beta[i];
    out.surplus.theta[i] = 1 + out.surplus.beta[i];
  }
  return out;
}

}  // namespace adnb
