#include <doctest.h>

#include "adnb/certify.hpp"
#include "adnb/oracle.hpp"
#include "support.hpp"

using namespace adnb;
using testing::make;
using testing::Q;
using testing::Qs;

using Alloc = std::vector<std::vector<Rational>>;

TEST_CASE("check_equilibrium") {
  EquilibriumCheck a = check_equilibrium(make({{2}}, {"1"}), Qs({"2"}));
  CHECK(a.ok);
  CHECK(a.x == Alloc{{Q("1")}});
  CHECK_FALSE(check_equilibrium(make({{2}}, {"1"}), Qs({"1"})).ok);
  CHECK(check_equilibrium(make({{1}}, {"0"}), Qs({"1"})).ok);
  CHECK_FALSE(check_equilibrium(make({{1}}, {"0"}), Qs({"0"})).ok);
  // A price of 0 is fine on a good nobody wants.
  CHECK(check_equilibrium(make({{1, 0}}, {"0"}), Qs({"1", "0"})).ok);
}

TEST_CASE("check_kkt") {
  CHECK(check_kkt(make({{2}}, {"1"}), Qs({"2"}), Alloc{{Q("1")}}));
  std::string why;
  CHECK_FALSE(check_kkt(make({{2}}, {"1"}), Qs({"2"}), Alloc{{Q("1/2")}}, &why));
  CHECK_FALSE(why.empty());
  CHECK(check_kkt(make({{1}}, {"0"}), Qs({"1"}), Alloc{{Q("1")}}));
  CHECK_FALSE(check_kkt(make({{1}}, {"1"}), Qs({"1"}), Alloc{{Q("1")}}));
}

TEST_CASE("check_feasibility_witness") {
  CHECK(check_feasibility_witness(make({{2}}, {"1"}), Qs({"1"})));
  CHECK_FALSE(check_feasibility_witness(make({{1}}, {"1"}), Qs({"1"})));
  CHECK(check_feasibility_witness(make({{1}}, {"0"}), Qs({"1/2"})));
}

TEST_CASE("verify_lp_dual") {
  CHECK(verify_lp_dual(make({{1}}, {"1"}), {Qs({"1"}), Qs({"1"})}));
  CHECK_FALSE(verify_lp_dual(make({{2}}, {"1"}), {Qs({"1/2"}), Qs({"1"})}));
  CHECK_FALSE(verify_lp_dual(make({{1}}, {"1"}), {Qs({"2"}), Qs({"2"})}));
  CHECK_FALSE(verify_lp_dual(make({{1}}, {"1"}), {Qs({"1"}), Qs({"1/2"})}));
}

TEST_CASE("verify_convex_dual") {
  BargainingInstance ex3 = make({{1, 0}, {0, 1}}, {"2", "0"});
  CHECK(verify_convex_dual(ex3, {{false, true}, {false, true}, Qs({"1", "1"})}));
  BargainingInstance leaky = make({{1, 1}, {0, 1}}, {"2", "0"});
  CHECK_FALSE(verify_convex_dual(leaky, {{false, true}, {false, true}, Qs({"1", "1"})}));
  BargainingInstance e3 = make({{2}}, {"1"});
  for (const auto& p : {Qs({"1"}), Qs({"2"}), Qs({"1/3"})}) {
    CHECK_FALSE(verify_convex_dual(e3, {{false}, {false}, p}));
    CHECK_FALSE(verify_convex_dual(e3, {{true}, {true}, p}));
  }
}

TEST_CASE("recover_prices_from_support") {
  CHECK(recover_prices_from_support(make({{1}}, {"0"}), {{0, 0}}) == Qs({"1"}));
  CHECK(recover_prices_from_support(make({{2}}, {"1"}), {{0, 0}}) == Qs({"2"}));
  CHECK(recover_prices_from_support(make({{2, 1}, {1, 2}}, {"0", "0"}), {{0, 0}, {1, 1}}) == Qs({"1", "1"}));
  CHECK_THROWS_AS(recover_prices_from_support(make({{1}}, {"1"}), {{0, 0}}), InputError);
}

TEST_CASE("recovered prices reproduce oracle equilibria") {
  for (std::uint64_t s = 0; s < 80; ++s) {
    BargainingInstance inst = gen_random(1 + s % 3, 1 + (s / 3) % 3, 4, 2, 500 + s);
    OracleResult o = oracle_solve(inst);
    if (!o.feasible) continue;
    // Every good with a positive price is in the support.
    bool all_goods = true;
    for (const auto& p : o.p) all_goods &= p > 0;
    if (!all_goods) continue;
    CAPTURE(s);
    CHECK(recover_prices_from_support(inst, o.support) == o.p);
  }
}
