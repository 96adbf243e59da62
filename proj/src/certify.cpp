#include "adnb/certify.hpp"

#include <deque>
#include <optional>

#include "adnb/balanced.hpp"

namespace adnb {

namespace {

bool same_shape(const BargainingInstance& inst, const std::vector<Rational>& p) {
  return p.size() == inst.g();
}

}  // namespace

EquilibriumCheck check_equilibrium(const BargainingInstance& inst, const std::vector<Rational>& p) {
  EquilibriumCheck out;
  if (!same_shape(inst, p)) {
    out.reason = "price vector has the wrong length";
    return out;
  }
  const std::size_t n = inst.n(), g = inst.g();
  // Goods nobody wants may sit at price 0; everything else must be priced.
  std::vector<std::size_t> priced;
  for (std::size_t j = 0; j < g; ++j) {
    if (p[j] > 0) {
      priced.push_back(j);
      continue;
    }
    if (p[j] < 0) {
      out.reason = "negative price";
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.u[i][j] > 0) {
        out.reason = "good " + std::to_string(j) + " is wanted but has price 0";
        return out;
      }
    }
  }
  if (priced.empty()) {
    out.reason = "no priced goods";
    return out;
  }
  BargainingInstance sub;
  sub.c = inst.c;
  sub.u.assign(n, {});
  std::vector<Rational> sub_p;
  for (std::size_t j : priced) sub_p.push_back(p[j]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : priced) sub.u[i].push_back(inst.u[i][j]);
  }

  EqNetwork net = build_network(sub, sub_p, MoneyMode::Flexible);
  for (std::size_t i = 0; i < n; ++i) {
    if (net.gamma[i] == 0) {
      out.reason = "buyer " + std::to_string(i) + " wants nothing";
      return out;
    }
  }
  MaxFlowResult mf = max_flow(net);
  if (mf.flow.value != net.active_price_sum()) {
    out.reason = "source cut is not minimum (max-flow " + to_string(mf.flow.value) + ", prices " +
                 to_string(net.active_price_sum()) + ")";
    return out;
  }
  if (mf.flow.value != net.active_money_sum()) {
    out.reason = "sink cut is not minimum (max-flow " + to_string(mf.flow.value) + ", money " +
                 to_string(net.active_money_sum()) + ")";
    return out;
  }
  out.ok = true;
  out.x.assign(n, std::vector<Rational>(g, Rational(0)));
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const Edge& e = net.edges[k];
    out.x[e.buyer][priced[e.good]] = mf.flow.on_edge[k] / sub_p[e.good];
  }
  return out;
}

bool check_kkt(const BargainingInstance& inst, const std::vector<Rational>& p, const Allocation& x,
               std::string* reason) {
  auto fail = [&](std::string why) {
    if (reason) *reason = std::move(why);
    return false;
  };
  const std::size_t n = inst.n(), g = inst.g();
  if (p.size() != g || x.size() != n) return fail("dimension mismatch");
  for (const auto& row : x) {
    if (row.size() != g) return fail("dimension mismatch");
  }
  std::vector<Rational> v(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (x[i][j] < 0) return fail("negative allocation");
      v[i] += Rational(inst.u[i][j]) * x[i][j];
    }
    if (v[i] <= inst.c[i]) return fail("buyer " + std::to_string(i) + " does not beat its disagreement point");
  }
  for (std::size_t j = 0; j < g; ++j) {
    if (p[j] < 0) return fail("negative price");
    Rational sold = 0;
    for (std::size_t i = 0; i < n; ++i) sold += x[i][j];
    if (sold > 1) return fail("good " + std::to_string(j) + " is oversold");
    if (p[j] > 0 && sold != 1) return fail("good " + std::to_string(j) + " has a price but is not fully sold");
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational gain = v[i] - inst.c[i];
    for (std::size_t j = 0; j < g; ++j) {
      Rational need = Rational(inst.u[i][j]) / gain;
      if (p[j] < need) return fail("price of good " + std::to_string(j) + " is below u/(v-c) for buyer " + std::to_string(i));
      if (x[i][j] > 0 && p[j] != need) {
        return fail("buyer " + std::to_string(i) + " gets good " + std::to_string(j) + " above u/(v-c)");
      }
    }
  }
  return true;
}

bool check_feasibility_witness(const BargainingInstance& inst, const std::vector<Rational>& p) {
  if (!same_shape(inst, p)) return false;
  for (const auto& pj : p) {
    if (pj <= 0) return false;
  }
  EqNetwork net = build_network(inst, p, MoneyMode::Flexible);
  for (const auto& gi : net.gamma) {
    if (gi == 0) return false;
  }
  BalancedFlow bf = balanced_flow(net);
  if (bf.flow.value != net.active_price_sum()) return false;
  for (const auto& t : bf.surplus.theta) {
    if (t >= 1) return false;
  }
  return true;
}

bool verify_lp_dual(const BargainingInstance& inst, const LPDualCertificate& cert) {
  const std::size_t n = inst.n(), g = inst.g();
  if (cert.y.size() != n || cert.z.size() != g) return false;
  Rational total = 0, objective = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.y[i] < 0) return false;
    total += cert.y[i];
    objective += inst.c[i] * cert.y[i];
  }
  if (total != 1) return false;
  for (std::size_t j = 0; j < g; ++j) {
    if (cert.z[j] < 0) return false;
    objective -= cert.z[j];
    for (std::size_t i = 0; i < n; ++i) {
      if (Rational(inst.u[i][j]) * cert.y[i] > cert.z[j]) return false;
    }
  }
  return objective >= 0;
}

bool verify_convex_dual(const BargainingInstance& inst, const ConvexDualCertificate& cert) {
  const std::size_t n = inst.n(), g = inst.g();
  if (cert.buyers.size() != n || cert.goods.size() != g || cert.p.size() != g) return false;
  for (const auto& pj : cert.p) {
    if (pj <= 0) return false;
  }
  bool rest_nonempty = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.buyers[i]) continue;
    rest_nonempty = true;
    for (std::size_t j = 0; j < g; ++j) {
      if (cert.goods[j] && inst.u[i][j] != 0) return false;
    }
  }
  if (!rest_nonempty) return false;

  // sum over the rest of c_i / gamma_i minus the rest's prices; this equals the
  // summed 1-surplus whenever the source cut is minimum.
  Rational slack = 0;
  for (std::size_t j = 0; j < g; ++j) {
    if (!cert.goods[j]) slack -= cert.p[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.buyers[i]) continue;
    Rational gamma = 0;
    for (std::size_t j = 0; j < g; ++j) {
      if (inst.u[i][j] == 0) continue;
      Rational r = Rational(inst.u[i][j]) / cert.p[j];
      if (r > gamma) gamma = r;
    }
    if (gamma == 0) return true;  // a buyer who wants nothing can never beat c_i >= 0
    slack += inst.c[i] / gamma;
  }
  return slack >= 0;
}

std::vector<Rational> recover_prices_from_support(const BargainingInstance& inst,
                                                  const std::vector<Edge>& support) {
  const std::size_t n = inst.n(), g = inst.g();
  std::vector<std::vector<std::size_t>> goods_of(n), buyers_of(g);
  for (const Edge& e : support) {
    if (e.good >= g || e.buyer >= n) throw InputError("support edge out of range");
    if (inst.u[e.buyer][e.good] == 0) throw InputError("support edge with zero utility");
    goods_of[e.buyer].push_back(e.good);
    buyers_of[e.good].push_back(e.buyer);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (goods_of[i].empty()) throw InputError("buyer " + std::to_string(i) + " is not covered by the support");
  }

  // p_j = coef_j * t_component
  std::vector<std::optional<Rational>> coef(g);
  std::vector<Rational> p(g, Rational(0));
  for (std::size_t root = 0; root < g; ++root) {
    if (coef[root] || buyers_of[root].empty()) continue;
    coef[root] = Rational(1);
    std::vector<std::size_t> comp_goods{root};
    std::vector<bool> buyer_seen(n, false);
    std::vector<std::size_t> comp_buyers;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t j = queue.front();
      queue.pop_front();
      for (std::size_t i : buyers_of[j]) {
        if (buyer_seen[i]) continue;
        buyer_seen[i] = true;
        comp_buyers.push_back(i);
        // u_ij / p_j is the same for all of i's support goods
        for (std::size_t k : goods_of[i]) {
          Rational want = Rational(inst.u[i][k]) * *coef[j] / Rational(inst.u[i][j]);
          if (!coef[k]) {
            coef[k] = want;
            comp_goods.push_back(k);
            queue.push_back(k);
          } else if (*coef[k] != want) {
            throw InputError("support graph forces two different prices on good " + std::to_string(k));
          }
        }
      }
    }
    // |buyers| + t * sum_i c_i coef_j(i) / u_ij(i) = t * sum_j coef_j
    Rational mass = 0, linear = 0;
    for (std::size_t k : comp_goods) mass += *coef[k];
    for (std::size_t i : comp_buyers) {
      std::size_t j = goods_of[i].front();
      linear += inst.c[i] * *coef[j] / Rational(inst.u[i][j]);
    }
    Rational denom = mass - linear;
    if (denom <= 0) throw InputError("component price equation has no positive root");
    Rational t = Rational(Integer(static_cast<unsigned long>(comp_buyers.size()))) / denom;
    for (std::size_t k : comp_goods) p[k] = *coef[k] * t;
  }
  for (std::size_t j = 0; j < g; ++j) {
    if (coef[j]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.u[i][j] > 0) throw InputError("good " + std::to_string(j) + " is wanted but not in the support");
    }
  }
  return p;
}

}  // namespace adnb
