#include "adnb/instance.hpp"

#include <algorithm>
#include <random>

#include "json_util.hpp"

namespace adnb {

using detail::json;

void validate(const BargainingInstance& inst) {
  if (inst.u.empty()) throw InputError("instance has no buyers");
  const std::size_t g = inst.u.front().size();
  if (g == 0) throw InputError("instance has no goods");
  for (const auto& row : inst.u) {
    if (row.size() != g) throw InputError("utility rows have different lengths");
    for (const auto& x : row) {
      if (x < 0) throw InputError("negative utility");
    }
  }
  if (inst.c.size() != inst.u.size()) {
    throw InputError("length of c does not match the number of buyers");
  }
  for (const auto& ci : inst.c) {
    if (ci < 0) throw InputError("negative disagreement utility " + to_string(ci));
  }
}

BargainingInstance parse_instance(const std::string& text) {
  json doc = detail::parse_json(text);
  if (!doc.is_object() || !doc.contains("u") || !doc.contains("c")) {
    throw InputError("instance document needs \"u\" and \"c\"");
  }
  BargainingInstance inst;
  inst.u = detail::integer_matrix(doc["u"], "u");
  inst.c = detail::rational_vector(doc["c"], "c");
  validate(inst);
  return inst;
}

std::string serialize_instance(const BargainingInstance& inst) {
  json doc;
  doc["u"] = detail::to_json(inst.u);
  doc["c"] = detail::to_json(inst.c);
  return doc.dump();
}

Preprocessed preprocess(const BargainingInstance& inst) {
  validate(inst);
  Preprocessed out;
  const std::size_t n = inst.n(), g = inst.g();
  for (std::size_t j = 0; j < g; ++j) {
    bool wanted = false;
    for (std::size_t i = 0; i < n && !wanted; ++i) wanted = inst.u[i][j] > 0;
    if (wanted) {
      out.kept_goods.push_back(j);
    } else {
      out.report.removed_goods.push_back(j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::all_of(inst.u[i].begin(), inst.u[i].end(), [](const Integer& x) { return x == 0; })) {
      out.report.zero_buyers.push_back(i);
    }
  }
  if (out.kept_goods.empty()) throw InputError("instance is empty after removing undesired goods");
  out.instance.c = inst.c;
  out.instance.u.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : out.kept_goods) out.instance.u[i].push_back(inst.u[i][j]);
  }
  return out;
}

InstanceParams compute_params(const BargainingInstance& inst, const Integer& mu) {
  InstanceParams params;
  params.U = 0;
  for (const auto& row : inst.u) {
    for (const auto& x : row) params.U = std::max(params.U, x);
  }
  params.C = 0;
  for (const auto& ci : inst.c) params.C = std::max(params.C, ci);
  Integer pow;
  mpz_pow_ui(pow.get_mpz_t(), params.U.get_mpz_t(), inst.n());
  params.Delta = Rational(Integer(static_cast<unsigned long>(inst.n()))) * params.C * Rational(pow);
  params.mu = mu;
  return params;
}

BargainingInstance gen_random(std::size_t n, std::size_t g, std::int64_t U, std::int64_t Cmax,
                              std::uint64_t seed) {
  if (n == 0 || g == 0) throw InputError("gen_random needs n, g >= 1");
  if (U < 1) throw InputError("gen_random needs U >= 1");
  if (Cmax < 0) throw InputError("gen_random needs Cmax >= 0");
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::int64_t hi) {
    return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi + 1));
  };

  BargainingInstance inst;
  inst.u.assign(n, std::vector<Integer>(g));
  for (auto& row : inst.u) {
    for (auto& x : row) x = static_cast<long>(draw(U));
  }
  // Redraw empty rows and columns until every buyer and every good has a positive entry.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& row : inst.u) {
      while (std::all_of(row.begin(), row.end(), [](const Integer& x) { return x == 0; })) {
        for (auto& x : row) x = static_cast<long>(draw(U));
        changed = true;
      }
    }
    for (std::size_t j = 0; j < g; ++j) {
      auto empty = [&] {
        for (std::size_t i = 0; i < n; ++i) {
          if (inst.u[i][j] > 0) return false;
        }
        return true;
      };
      while (empty()) {
        for (std::size_t i = 0; i < n; ++i) inst.u[i][j] = static_cast<long>(draw(U));
        changed = true;
      }
    }
  }

  inst.c.resize(n);
  for (auto& ci : inst.c) {
    std::int64_t den = 1 + draw(15);
    std::int64_t num = draw(Cmax * den);
    ci = make_rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  }
  return inst;
}

L1Config gen_l1_adversarial(std::size_t n, const Rational& delta, const Rational& H) {
  if (n < 2) throw InputError("gen_l1_adversarial needs n >= 2");
  if (delta <= 0) throw InputError("gen_l1_adversarial needs delta > 0");
  if (H <= 0) throw InputError("gen_l1_adversarial needs H > 0");
  const std::size_t size = n + 1;
  L1Config cfg;
  cfg.money.resize(size);
  cfg.price.resize(size);
  Integer two_pow = 1;
  for (std::size_t i = 1; i < n; ++i) {
    two_pow *= 2;
    cfg.money[i] = delta / Rational(two_pow);
    cfg.price[i] = cfg.money[i];
  }
  cfg.money[0] = 1 + delta;
  cfg.price[0] = 1;
  cfg.money[n] = H + delta / Rational(Integer(static_cast<unsigned long>(n)));
  cfg.price[n] = cfg.money[n];

  // Each edge (g_i, b_{i-1}) becomes tight after one more factor (1 + eps) on p_{i-1}.
  Integer four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, n);
  Rational eps = make_rational(1, Integer(static_cast<unsigned long>(n)) * four_pow);

  cfg.u.assign(size, std::vector<Integer>(size, 0));
  for (std::size_t i = 1; i <= n; ++i) {
    Rational cross = cfg.price[i] / (cfg.price[i - 1] * (1 + eps));
    Integer scale = cross.get_den();
    cfg.u[i - 1][i - 1] = scale;
    cfg.u[i - 1][i] = cross.get_num();
  }
  cfg.u[n][n] = 1;
  return cfg;
}

std::vector<std::vector<Rational>> WirelessMapping::allocation(
    const std::vector<std::vector<Rational>>& y) const {
  std::vector<std::vector<Rational>> x = y;
  for (auto& row : x) {
    for (std::size_t j = 0; j < row.size() && j < pi.size(); ++j) row[j] *= pi[j];
  }
  return x;
}

std::vector<Rational> WirelessMapping::utilities(const std::vector<Rational>& v_scaled) const {
  std::vector<Rational> v = v_scaled;
  for (auto& vi : v) vi /= Rational(M);
  return v;
}

WirelessScenario parse_wireless(const std::string& text) {
  json doc = detail::parse_json(text);
  if (!doc.is_object() || !doc.contains("pi") || !doc.contains("rates") || !doc.contains("c")) {
    throw InputError("wireless document needs \"pi\", \"rates\" and \"c\"");
  }
  WirelessScenario s;
  s.pi = detail::rational_vector(doc["pi"], "pi");
  s.rates = detail::integer_matrix(doc["rates"], "rates");
  s.c = detail::rational_vector(doc["c"], "c");
  return s;
}

WirelessMapping wireless_adapter(const WirelessScenario& s) {
  if (s.pi.empty()) throw InputError("wireless scenario has no states");
  for (const auto& p : s.pi) {
    if (p <= 0) throw InputError("zero-probability state");
  }
  for (const auto& row : s.rates) {
    if (row.size() != s.pi.size()) throw InputError("rates row length does not match pi");
  }
  WirelessMapping map;
  map.pi = s.pi;
  map.M = lcm_of_denominators(s.pi);
  map.instance.u.assign(s.rates.size(), std::vector<Integer>(s.pi.size()));
  for (std::size_t i = 0; i < s.rates.size(); ++i) {
    for (std::size_t j = 0; j < s.pi.size(); ++j) {
      Rational scaled = Rational(s.rates[i][j]) * s.pi[j] * Rational(map.M);
      map.instance.u[i][j] = scaled.get_num();   // integral by choice of M
    }
  }
  map.instance.c.clear();
  for (const auto& ci : s.c) map.instance.c.push_back(ci * Rational(map.M));
  validate(map.instance);
  return map;
}

}  // namespace adnb
