#pragma once

#include <vector>

#include "adnb/instance.hpp"
#include "adnb/market.hpp"

namespace adnb {

struct FisherMarket {
  UtilityMatrix u;
  std::vector<Rational> m;
};

struct FisherOptions {
  int check_level = 1;
  bool trace = false;
  bool record_prices = false;
};

struct FisherResult {
  std::vector<Rational> p;
  std::vector<std::vector<Rational>> x;
  RunStats stats;
};

void validate(const FisherMarket& market);

// Linear Fisher equilibrium with fixed budgets, starting from p_j = min_i m_i / g.
FisherResult fisher_equilibrium(const FisherMarket& market, const FisherOptions& options = {});

struct L1Measurement {
  Rational l1_start;
  Rational l1_end;
  Rational l1_drop;
  Rational l2_start;
  Rational l2_end;
  Rational l2_ratio;
  std::vector<TraceRecord> events;
  std::vector<Rational> prices_after;
};

// Runs exactly one price-raising phase from the given configuration.
L1Measurement measure_l1_vs_l2(const L1Config& config, int check_level = 1);

// x_ij = f(j, i) / p_j for a flow in `net`.
std::vector<std::vector<Rational>> allocation_from_flow(const EqNetwork& net, const Flow& flow);

}  // namespace adnb
