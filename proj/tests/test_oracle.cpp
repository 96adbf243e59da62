#include <doctest.h>

#include "adnb/oracle.hpp"
#include "support.hpp"

using namespace adnb;
using testing::make;
using testing::Q;
using testing::Qs;

TEST_CASE("oracle_solve") {
  OracleResult a = oracle_solve(make({{1}}, {"0"}));
  CHECK(a.feasible);
  CHECK(a.p == Qs({"1"}));
  CHECK(a.v == Qs({"1"}));
  CHECK_FALSE(oracle_solve(make({{1}}, {"1"})).feasible);
  OracleResult e5 = oracle_solve(make({{2, 1}, {1, 2}}, {"0", "0"}));
  CHECK(e5.p == Qs({"1", "1"}));
  CHECK(e5.v == Qs({"2", "2"}));
  CHECK(e5.supports_tried <= 15);
  CHECK_THROWS_AS(oracle_solve(gen_random(4, 4, 3, 1, 1)), InputError);
  CHECK_NOTHROW(oracle_solve(gen_random(2, 3, 3, 1, 1), 6));
}

TEST_CASE("feasibility_lp") {
  CHECK(feasibility_lp(make({{1}}, {"1"})) == 0);
  CHECK(feasibility_lp(make({{2}}, {"1"})) == 1);
  CHECK(feasibility_lp(make({{1}, {1}}, {"0", "0"})) == Q("1/2"));
  CHECK(feasibility_lp(make({{1, 0}, {0, 1}}, {"2", "0"})) == -1);
  CHECK(feasibility_lp(make({{2, 1}, {1, 2}}, {"1/2", "1/2"})) == Q("3/2"));
}

TEST_CASE("limit algorithm") {
  LimitResult z = limit_algorithm(make({{2, 1}, {1, 2}}, {"0", "0"}), 10, default_limit_eps());
  CHECK(z.iterations == 1);
  CHECK(z.exact);
  CHECK(z.p == Qs({"1", "1"}));

  LimitResult e3 = limit_algorithm(make({{2}}, {"1"}), 100, default_limit_eps());
  CHECK(e3.converged);
  REQUIRE(e3.m_history.size() >= 3);
  CHECK(e3.m_history[0] == Qs({"1"}));
  CHECK(e3.m_history[1] == Qs({"3/2"}));
  CHECK(e3.m_history[2] == Qs({"7/4"}));
  for (std::size_t k = 1; k < e3.m_history.size(); ++k) {
    CHECK(e3.m_history[k][0] == 1 + e3.m_history[k - 1][0] / 2);
    CHECK(e3.p_history[k - 1][0] == e3.m_history[k - 1][0]);
  }
  CHECK(2 - e3.p[0] < default_limit_eps() * 2);

  LimitResult bad = limit_algorithm(make({{1}}, {"1"}), 30, default_limit_eps());
  CHECK_FALSE(bad.converged);
  CHECK(bad.iterations == 30);
  CHECK_THROWS_AS(limit_algorithm(make({{0}, {1}}, {"0", "0"}), 5, default_limit_eps()), InputError);

  std::vector<Rational> ref = Qs({"2"});
  LimitResult near = limit_algorithm(make({{2}}, {"1"}), 100, default_limit_eps(), &ref);
  CHECK(near.reached_reference);
  CHECK(2 - near.p[0] <= default_limit_eps());
}
