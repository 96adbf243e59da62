#include "adnb/fisher.hpp"

#include <algorithm>

namespace adnb {

void validate(const FisherMarket& market) {
  BargainingInstance shape{market.u, std::vector<Rational>(market.u.size(), Rational(0))};
  validate(shape);
  if (market.m.size() != market.u.size()) throw InputError("money vector length does not match buyers");
  for (const auto& mi : market.m) {
    if (mi <= 0) throw InputError("Fisher budgets must be positive");
  }
  Preprocessed pre = preprocess(shape);
  if (!pre.report.empty()) throw InputError("every buyer and every good needs a positive utility");
}

std::vector<std::vector<Rational>> allocation_from_flow(const EqNetwork& net, const Flow& flow) {
  std::vector<std::vector<Rational>> x(net.n, std::vector<Rational>(net.g, Rational(0)));
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const Edge& e = net.edges[k];
    if (flow.on_edge[k] != 0) x[e.buyer][e.good] = flow.on_edge[k] / net.price[e.good];
  }
  return x;
}

namespace {

// Safety net only: four times a phase bound of the same shape as the flexible case,
// with the budgets scaled to integers.
std::size_t fisher_phase_cap(const FisherMarket& market) {
  const std::size_t n = market.u.size();
  Integer scale = lcm_of_denominators(market.m);
  Rational total = 0;
  for (const auto& mi : market.m) total += mi;
  Integer U = 1;
  for (const auto& row : market.u) {
    for (const auto& x : row) U = std::max(U, x);
  }
  std::size_t bits = ceil_log2(total * Rational(scale)) + n * ceil_log2(U) + ceil_log2(Integer(static_cast<unsigned long>(n))) + 2;
  return 4 * (n * n * std::max<std::size_t>(1, 4 * bits + ceil_log2(Integer(static_cast<unsigned long>(n)))) + n + 1);
}

}  // namespace

FisherResult fisher_equilibrium(const FisherMarket& market, const FisherOptions& options) {
  validate(market);
  const std::size_t g = market.u.front().size();
  Rational low = *std::min_element(market.m.begin(), market.m.end());
  std::vector<Rational> p(g, low / Rational(Integer(static_cast<unsigned long>(g))));
  // A good nobody wants at the uniform start has no edge and would break the
  // invariant. Lower it until it ties some buyer's best ratio; alpha is unchanged.
  std::vector<Rational> alpha(market.u.size(), Rational(0));
  for (std::size_t i = 0; i < market.u.size(); ++i) {
    for (std::size_t j = 0; j < g; ++j) alpha[i] = std::max<Rational>(alpha[i], Rational(market.u[i][j]) / p[j]);
  }
  for (std::size_t j = 0; j < g; ++j) {
    Rational best = 0;
    for (std::size_t i = 0; i < market.u.size(); ++i) best = std::max<Rational>(best, Rational(market.u[i][j]) / alpha[i]);
    p[j] = best;
  }

  FisherResult out;
  MarketState st = make_market(market.u, MoneyMode::Fixed, market.m, p);
  refresh(st, out.stats);
  RaiseConfig cfg;
  cfg.stage = "fisher";
  cfg.check_level = options.check_level;
  cfg.trace = options.trace;
  cfg.record_prices = options.record_prices;
  cfg.phase_cap = fisher_phase_cap(market);
  if (options.record_prices) out.stats.price_history.push_back(st.price);
  raise_prices(st, cfg, out.stats);

  if (st.balanced.flow.value != st.net.active_money_sum() || st.balanced.flow.value != st.net.active_price_sum()) {
    throw InternalError("Fisher solver ended without clearing the market");
  }
  out.p = st.price;
  out.x = allocation_from_flow(st.net, st.balanced.flow);
  return out;
}

L1Measurement measure_l1_vs_l2(const L1Config& config, int check_level) {
  FisherMarket market{config.u, config.money};
  validate(market);
  if (config.price.size() != market.u.front().size()) throw InputError("price vector has the wrong length");
  for (const auto& pj : config.price) {
    if (pj <= 0) throw InputError("prices must be positive");
  }
  RunStats stats;
  MarketState st = make_market(market.u, MoneyMode::Fixed, market.m, config.price);
  refresh(st, stats);
  if (st.balanced.flow.value != st.net.active_price_sum()) {
    throw InputError("configuration violates the invariant: source cut is not minimum");
  }
  RaiseConfig cfg;
  cfg.stage = "fisher";
  cfg.check_level = check_level;
  cfg.trace = true;
  cfg.max_phases = 1;
  raise_prices(st, cfg, stats);

  L1Measurement out;
  if (stats.phases.empty()) throw InputError("configuration has no surplus; nothing to measure");
  const PhaseRecord& rec = stats.phases.front();
  out.l1_start = rec.l1_start;
  out.l1_end = rec.l1_end;
  out.l1_drop = rec.l1_start - rec.l1_end;
  out.l2_start = rec.phi_start;
  out.l2_end = rec.phi_end;
  out.l2_ratio = rec.phi_end / rec.phi_start;
  out.events = stats.trace;
  out.prices_after = st.price;
  return out;
}

}  // namespace adnb
