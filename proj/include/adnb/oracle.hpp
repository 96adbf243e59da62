#pragma once

#include <optional>
#include <vector>

#include "adnb/certify.hpp"
#include "adnb/instance.hpp"

namespace adnb {

struct OracleResult {
  bool feasible = false;
  std::vector<Rational> p;
  Allocation x;
  std::vector<Rational> v;
  std::vector<Edge> support;
  std::size_t supports_tried = 0;
};

inline constexpr std::size_t kOracleCap = 12;

// Enumerates supports of x and solves the KKT equalities on each, with
// q_j = 1/p_j as unknowns. Throws InputError when n * g exceeds `cap`.
OracleResult oracle_solve(const BargainingInstance& inst, std::size_t cap = kOracleCap);

// max t subject to sum_j u_ij x_ij >= c_i + t and sum_i x_ij <= 1, x >= 0.
Rational feasibility_lp(const BargainingInstance& inst);

struct LimitResult {
  std::vector<Rational> p;
  std::vector<Rational> m;
  std::size_t iterations = 0;
  bool converged = false;
  bool exact = false;          // stopped on m' == m
  bool reached_reference = false;
  std::vector<std::vector<Rational>> p_history;
  std::vector<std::vector<Rational>> m_history;   // starts with the all-ones vector
};

Rational default_limit_eps();

// Fisher prices for money m, then m_i <- 1 + c_i / gamma_i, until m stops
// moving (exactly or by less than eps in max norm) or max_iter rounds pass.
// With a reference price vector the stop rule is max_j |p_j - ref_j| <= eps
// instead; a small step in m does not bound the distance to the limit.
LimitResult limit_algorithm(const BargainingInstance& inst, std::size_t max_iter, const Rational& eps,
                            const std::vector<Rational>* reference = nullptr);

}  // namespace adnb
