#include <doctest.h>

#include <random>

#include "adnb/balanced.hpp"
#include "support.hpp"

using namespace adnb;
using testing::make;
using testing::Q;
using testing::Qs;

TEST_CASE("balanced flow examples") {
  EqNetwork a = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1"}));
  CHECK(balanced_flow(a).surplus.theta == Qs({"0"}));

  EqNetwork b = build_network(make({{1}, {1}}, {"0", "0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1", "1"}));
  BalancedFlow bb = balanced_flow(b);
  CHECK(bb.surplus.theta == Qs({"1/2", "1/2"}));
  CHECK(bb.surplus.beta == Qs({"-1/2", "-1/2"}));

  // Disjoint paths: buyer 2 spends all of its 1/4, good 2 stays partly unsold.
  EqNetwork c = build_network(make({{1, 0}, {0, 1}}, {"0", "0"}), Qs({"1", "1"}), MoneyMode::Fixed, Qs({"1", "1/4"}));
  BalancedFlow cc = balanced_flow(c);
  CHECK(cc.surplus.theta == Qs({"0", "0"}));
  CHECK(cc.flow.source[1] == Q("1/4"));
  CHECK(cc.flow.value == Q("5/4"));
}

TEST_CASE("balance check flags uphill residual paths") {
  EqNetwork b = build_network(make({{1}, {1}}, {"0", "0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1", "1"}));
  CHECK(verify_property1(b, balanced_flow(b).flow) == Property1Status::Holds);

  // All of the good to buyer 2: theta = (1, 0) and buyer 1 reaches buyer 2.
  Flow lopsided = zero_flow(b);
  for (std::size_t k = 0; k < b.edges.size(); ++k) {
    if (b.edges[k].buyer == 1) lopsided.on_edge[k] = 1;
  }
  lopsided.source[0] = 1;
  lopsided.sink[1] = 1;
  lopsided.value = 1;
  REQUIRE(is_feasible_flow(b, lopsided));
  CHECK(verify_property1(b, lopsided) == Property1Status::Violated);
  CHECK(verify_property1(b, zero_flow(b)) == Property1Status::NotMaximum);

  EqNetwork single = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"3"}));
  CHECK(verify_property1(single, balanced_flow(single).flow) == Property1Status::Holds);
}

TEST_CASE("E5 balanced residual separates the buyers") {
  EqNetwork e5 = build_network(make({{2, 1}, {1, 2}}, {"0", "0"}), Qs({"1", "1"}), MoneyMode::Flexible);
  BalancedFlow f = balanced_flow(e5);
  CHECK(verify_property1(e5, f.flow) == Property1Status::Holds);
  CHECK_FALSE(residual_reachable(e5, f.flow, {e5.buyer_node(0)})[e5.buyer_node(1)]);
  CHECK_FALSE(residual_reachable(e5, f.flow, {e5.buyer_node(1)})[e5.buyer_node(0)]);
}

TEST_CASE("scale_flow") {
  // E3 at p = 1: m = 3/2, theta = 1/2.
  EqNetwork e3 = build_network(make({{2}}, {"1"}), Qs({"1"}), MoneyMode::Flexible);
  BalancedFlow f = balanced_flow(e3);
  REQUIRE(f.surplus.beta == Qs({"-1/2"}));
  BalancedFlow same = scale_flow(f, 1);
  CHECK(same.surplus.beta == f.surplus.beta);
  CHECK(same.flow.value == f.flow.value);

  BalancedFlow twice = scale_flow(f, 2);
  CHECK(twice.surplus.beta == Qs({"-1"}));
  EqNetwork e3b = build_network(make({{2}}, {"1"}), Qs({"2"}), MoneyMode::Flexible);
  CHECK(balanced_flow(e3b).surplus.beta == Qs({"-1"}));

  BalancedFlow half = scale_flow(f, Q("1/2"));
  CHECK(half.surplus.beta == Qs({"-1/4"}));
  EqNetwork e3c = build_network(make({{2}}, {"1"}), Qs({"1/2"}), MoneyMode::Flexible);
  CHECK(balanced_flow(e3c).surplus.beta == Qs({"-1/4"}));
}

TEST_CASE("balanced flow against brute force and relabelling") {
  std::mt19937_64 rng(20240611);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + round % 4, g = 1 + (round / 4) % 4;
    EqNetwork net = testing::random_network(rng, n, g);
    BalancedFlow f = balanced_flow(net);
    CAPTURE(round);
    REQUIRE(is_feasible_flow(net, f.flow));
    CHECK(f.flow.value == max_flow(net).flow.value);
    CHECK(verify_property1(net, f.flow) == Property1Status::Holds);
    CHECK(f.surplus.theta == testing::brute_force_surplus(net));

    std::vector<std::size_t> bperm(n), gperm(g);
    std::iota(bperm.begin(), bperm.end(), 0);
    std::iota(gperm.begin(), gperm.end(), 0);
    std::reverse(bperm.begin(), bperm.end());
    std::rotate(gperm.begin(), gperm.begin() + g / 2, gperm.end());
    BalancedFlow h = balanced_flow(testing::permuted(net, bperm, gperm));
    for (std::size_t i = 0; i < n; ++i) CHECK(h.surplus.theta[bperm[i]] == f.surplus.theta[i]);
  }
}

TEST_CASE("any maximum flow passing the balance check has the l2-optimal surplus") {
  std::mt19937_64 rng(77);
  std::size_t exercised = 0;
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = 1 + round % 4, g = 1 + (round / 4) % 4;
    EqNetwork net = testing::random_network(rng, n, g);
    Flow plain = max_flow(net).flow;
    if (verify_property1(net, plain) != Property1Status::Holds) continue;
    ++exercised;
    CAPTURE(round);
    CHECK(surplus_of(net, plain).theta == testing::brute_force_surplus(net));
  }
  CHECK(exercised > 50);
}
