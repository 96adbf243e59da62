#pragma once

#include <string>
#include <vector>

#include "adnb/flownet.hpp"
#include "adnb/instance.hpp"

namespace adnb {

using Allocation = std::vector<std::vector<Rational>>;

// Dual of the feasibility LP. A valid one with objective >= 0 proves t* <= 0.
struct LPDualCertificate {
  std::vector<Rational> y;
  std::vector<Rational> z;
};

// Prices plus a split (B_split, G_split) such that nobody outside B_split wants
// G_split and the remaining buyers' c_i / gamma_i cover the remaining prices.
struct ConvexDualCertificate {
  std::vector<bool> buyers;
  std::vector<bool> goods;
  std::vector<Rational> p;
};

struct EquilibriumCheck {
  bool ok = false;
  Allocation x;
  std::string reason;
};

// One max-flow in N(p) with flexible money. Goods priced 0 must be unwanted.
EquilibriumCheck check_equilibrium(const BargainingInstance& inst, const std::vector<Rational>& p);

// Exact KKT conditions of the bargaining program plus v_i > c_i.
bool check_kkt(const BargainingInstance& inst, const std::vector<Rational>& p, const Allocation& x,
               std::string* reason = nullptr);

// Small prices whose balanced flow leaves every surplus below 1.
bool check_feasibility_witness(const BargainingInstance& inst, const std::vector<Rational>& p);

bool verify_lp_dual(const BargainingInstance& inst, const LPDualCertificate& cert);
bool verify_convex_dual(const BargainingInstance& inst, const ConvexDualCertificate& cert);

// Prices from an equilibrium support graph: one unknown per connected
// component, fixed by equating the component's money with its price mass.
// Throws InputError on an inconsistent support.
std::vector<Rational> recover_prices_from_support(const BargainingInstance& inst,
                                                  const std::vector<Edge>& support);

}  // namespace adnb
