#include <doctest.h>

#include "adnb/flownet.hpp"
#include "support.hpp"

using namespace adnb;
using testing::make;
using testing::Q;
using testing::Qs;

TEST_CASE("build_network") {
  EqNetwork a = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Flexible);
  CHECK(a.gamma == Qs({"1"}));
  CHECK(a.money == Qs({"1"}));
  CHECK(a.price == Qs({"1"}));
  CHECK(a.edges == std::vector<Edge>{{0, 0}});

  EqNetwork b = build_network(make({{2}}, {"1"}), Qs({"2"}), MoneyMode::Flexible);
  CHECK(b.gamma == Qs({"1"}));
  CHECK(b.money == Qs({"2"}));

  EqNetwork c = build_network(make({{2, 1}, {1, 2}}, {"0", "0"}), Qs({"1", "1"}), MoneyMode::Flexible);
  CHECK(c.edges == std::vector<Edge>{{0, 0}, {1, 1}});
  CHECK(c.money == Qs({"1", "1"}));

  EqNetwork d = build_network(make({{1, 1}}, {"0"}), Qs({"1", "1"}), MoneyMode::Fixed, Qs({"3/2"}));
  CHECK(d.money == Qs({"3/2"}));
  CHECK(d.edges.size() == 2);
}

TEST_CASE("max_flow values and cuts") {
  EqNetwork a = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1"}));
  MaxFlowResult ra = max_flow(a);
  CHECK(ra.flow.value == 1);
  CHECK(source_cut_minimum(a, ra.flow));
  CHECK(sink_cut_minimum(a, ra.flow));

  EqNetwork b = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1/2"}));
  MaxFlowResult rb = max_flow(b);
  CHECK(rb.flow.value == Q("1/2"));
  CHECK(sink_cut_minimum(b, rb.flow));
  CHECK_FALSE(source_cut_minimum(b, rb.flow));
  CHECK(rb.source_side[b.good_node(0)]);
  CHECK(rb.source_side[b.buyer_node(0)]);
  CHECK_FALSE(rb.source_side[b.sink()]);

  EqNetwork e5 = build_network(make({{2, 1}, {1, 2}}, {"0", "0"}), Qs({"1", "1"}), MoneyMode::Flexible);
  MaxFlowResult r5 = max_flow(e5);
  CHECK(r5.flow.value == 2);
  CHECK(is_feasible_flow(e5, r5.flow));
}

TEST_CASE("residual reachability") {
  EqNetwork a = build_network(make({{1}}, {"0"}), Qs({"1"}), MoneyMode::Fixed, Qs({"1"}));
  Flow zero = zero_flow(a);
  auto from_good = residual_reachable(a, zero, {a.good_node(0)});
  CHECK(from_good[a.buyer_node(0)]);
  auto from_buyer = residual_reachable(a, zero, {a.buyer_node(0)});
  CHECK_FALSE(from_buyer[a.good_node(0)]);
  CHECK_FALSE(from_buyer[a.sink()]);

  // With flow on the edge the reverse arc opens.
  Flow full = max_flow(a).flow;
  CHECK(residual_reachable(a, full, {a.buyer_node(0)})[a.good_node(0)]);
  CHECK(residual_coreachable(a, full, {a.good_node(0)})[a.buyer_node(0)]);
}

TEST_CASE("is_small") {
  CHECK(is_small(make({{1}}, {"0"}), Qs({"1/2"})));
  CHECK_FALSE(is_small(make({{1}}, {"0"}), Qs({"2"})));
  CHECK(is_small(make({{1}}, {"1"}), Qs({"1"})));
  CHECK_FALSE(is_small(make({{1}}, {"0"}), Qs({"0"})));
}

TEST_CASE("bang per buck ties and flexible money") {
  BangPerBuck b = bang_per_buck(make({{2, 1, 2}}, {"0"}).u, Qs({"1", "1", "1"}), {true, true, true});
  CHECK(b.gamma == Qs({"2"}));
  CHECK(b.best[0] == std::vector<std::size_t>{0, 2});
  CHECK(flexible_money(Qs({"1", "3"}), Qs({"2", "0"})) == Qs({"3/2", "1"}));
}
