#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adnb/rational.hpp"

namespace adnb {

using UtilityMatrix = std::vector<std::vector<Integer>>;

struct BargainingInstance {
  UtilityMatrix u;           // n x g, nonnegative integers
  std::vector<Rational> c;   // length n, nonnegative

  std::size_t n() const { return u.size(); }
  std::size_t g() const { return u.empty() ? 0 : u.front().size(); }
};

struct InstanceParams {
  Integer U;
  Rational C;
  Rational Delta;   // n * C * U^n
  Integer mu = 1;
};

struct PreprocessReport {
  std::vector<std::size_t> removed_goods;
  std::vector<std::size_t> zero_buyers;
  bool empty() const { return removed_goods.empty() && zero_buyers.empty(); }
};

struct Preprocessed {
  BargainingInstance instance;
  PreprocessReport report;
  std::vector<std::size_t> kept_goods;   // reduced index -> original index
};

// Throws InputError on shape or sign problems.
void validate(const BargainingInstance& inst);

BargainingInstance parse_instance(const std::string& text);
std::string serialize_instance(const BargainingInstance& inst);

// Removes goods nobody wants and reports buyers who want nothing.
Preprocessed preprocess(const BargainingInstance& inst);

InstanceParams compute_params(const BargainingInstance& inst, const Integer& mu = 1);

BargainingInstance gen_random(std::size_t n, std::size_t g, std::int64_t U, std::int64_t Cmax,
                              std::uint64_t seed);

// Fixed-money Fisher configuration with buyers b_0..b_n and goods g_0..g_n.
struct L1Config {
  UtilityMatrix u;
  std::vector<Rational> money;
  std::vector<Rational> price;
};

L1Config gen_l1_adversarial(std::size_t n, const Rational& delta, const Rational& H);

struct WirelessScenario {
  std::vector<Rational> pi;
  std::vector<std::vector<Integer>> rates;
  std::vector<Rational> c;
};

struct WirelessMapping {
  BargainingInstance instance;
  Integer M;                 // common scale
  std::vector<Rational> pi;

  // x_ij = pi_j * y_ij
  std::vector<std::vector<Rational>> allocation(const std::vector<std::vector<Rational>>& y) const;
  // v_i = v'_i / M
  std::vector<Rational> utilities(const std::vector<Rational>& v_scaled) const;
};

WirelessScenario parse_wireless(const std::string& text);
WirelessMapping wireless_adapter(const WirelessScenario& scenario);

}  // namespace adnb
