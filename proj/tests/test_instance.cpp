#include <doctest.h>

#include "adnb/fisher.hpp"
#include "adnb/instance.hpp"
#include "adnb/oracle.hpp"
#include "support.hpp"

using namespace adnb;
using testing::make;
using testing::Q;
using testing::Qs;

TEST_CASE("parse_instance accepts minimal and square instances") {
  BargainingInstance a = parse_instance(R"({"u":[[1]],"c":["0"]})");
  CHECK(a.n() == 1);
  CHECK(a.g() == 1);
  BargainingInstance b = parse_instance(R"({"u":[[2,1],[1,2]],"c":["0","0"]})");
  CHECK(b.n() == 2);
  CHECK(b.g() == 2);
  CHECK(b.u[0][1] == 1);
}

TEST_CASE("parse_instance rejects bad input") {
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1]],"c":["-1"]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1]],"c":["1/0"]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1]],"c":["x"]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1,2],[3]],"c":["0","0"]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[-1]],"c":["0"]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"u":[[1]],"c":["0"])"), ParseError);
}

TEST_CASE("serialize then parse round-trips") {
  BargainingInstance a = make({{3, 0, 1}, {0, 2, 5}}, {"1/3", "7"});
  BargainingInstance b = parse_instance(serialize_instance(a));
  CHECK(b.u == a.u);
  CHECK(b.c == a.c);
}

TEST_CASE("preprocess drops undesired goods and reports idle buyers") {
  Preprocessed p = preprocess(make({{1, 0}}, {"0"}));
  CHECK(p.report.removed_goods == std::vector<std::size_t>{1});
  CHECK(p.instance.g() == 1);
  CHECK(p.kept_goods == std::vector<std::size_t>{0});

  Preprocessed q = preprocess(make({{0}, {1}}, {"0", "0"}));
  CHECK(q.report.zero_buyers == std::vector<std::size_t>{0});

  Preprocessed r = preprocess(make({{1}}, {"0"}));
  CHECK(r.report.empty());
  CHECK(r.instance.u == make({{1}}, {"0"}).u);
}

TEST_CASE("gen_random") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    BargainingInstance one = gen_random(1, 1, 1, 0, s);
    CHECK(one.u == make({{1}}, {"0"}).u);
    CHECK(one.c == Qs({"0"}));
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    BargainingInstance inst = gen_random(2, 2, 3, 1, s);
    REQUIRE(inst.n() == 2);
    REQUIRE(inst.g() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK((inst.u[i][0] > 0 || inst.u[i][1] > 0));
      CHECK((inst.u[0][i] > 0 || inst.u[1][i] > 0));
      CHECK(inst.c[i] >= 0);
      CHECK(inst.c[i] <= 1);
      for (std::size_t j = 0; j < 2; ++j) CHECK(inst.u[i][j] <= 3);
    }
  }
  BargainingInstance a = gen_random(4, 5, 10, 10, 99), b = gen_random(4, 5, 10, 10, 99);
  CHECK(a.u == b.u);
  CHECK(a.c == b.c);
}

TEST_CASE("gen_l1_adversarial layout") {
  L1Config cfg = gen_l1_adversarial(2, Q("1"), Q("2"));
  CHECK(cfg.money == Qs({"2", "1/2", "5/2"}));
  CHECK(cfg.price == Qs({"1", "1/2", "5/2"}));
  CHECK(cfg.u.size() == 3);

  L1Config big = gen_l1_adversarial(10, Q("1"), Q("10"));
  CHECK(big.money[0] - big.price[0] == 1);
  for (std::size_t i = 1; i <= 10; ++i) CHECK(big.money[i] == big.price[i]);
  CHECK(big.price[3] == Q("1/8"));
  CHECK(big.price[10] == Q("101/10"));
  CHECK_THROWS_AS(gen_l1_adversarial(1, Q("1"), Q("2")), InputError);
}

TEST_CASE("wireless adapter") {
  WirelessMapping a = wireless_adapter(parse_wireless(R"({"pi":["1"],"rates":[[3]],"c":["0"]})"));
  CHECK(a.M == 1);
  CHECK(a.instance.u == make({{3}}, {"0"}).u);
  CHECK(a.allocation({{Q("1")}}) == std::vector<std::vector<Rational>>{{Q("1")}});

  WirelessMapping b = wireless_adapter(parse_wireless(R"({"pi":["1/2","1/2"],"rates":[[2,2]],"c":["0"]})"));
  CHECK(b.M == 2);
  CHECK(b.instance.u == make({{2, 2}}, {"0"}).u);

  WirelessMapping c = wireless_adapter(parse_wireless(R"({"pi":["1/3"],"rates":[[1]],"c":["0"]})"));
  CHECK(c.M == 3);
  CHECK(c.instance.u == make({{1}}, {"0"}).u);

  CHECK_THROWS_AS(wireless_adapter(parse_wireless(R"({"pi":["0"],"rates":[[1]],"c":["0"]})")), InputError);
}

TEST_CASE("wireless back-map matches the unscaled problem") {
  // Two users, two equiprobable states. In the scaled instance each good is one
  // state; utilities come back divided by M.
  WirelessMapping map =
      wireless_adapter(parse_wireless(R"({"pi":["1/2","1/2"],"rates":[[3,1],[1,2]],"c":["1/2","1/4"]})"));
  OracleResult o = oracle_solve(map.instance);
  REQUIRE(o.feasible);
  std::vector<Rational> v = map.utilities(o.v);
  auto x = map.allocation(o.x);
  const std::vector<std::vector<long>> rates{{3, 1}, {1, 2}};
  for (std::size_t i = 0; i < 2; ++i) {
    Rational direct = 0;
    for (std::size_t j = 0; j < 2; ++j) direct += rates[i][j] * x[i][j];
    CHECK(direct == v[i]);
  }
  CHECK(v[0] > Q("1/2"));
  CHECK(v[1] > Q("1/4"));
}
