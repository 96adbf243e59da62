#include <doctest.h>
#include <json.hpp>

#include <string>

#include "adnb/adnb.h"

using json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  adnb_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("C API: parse errors map to status codes") {
  adnb_instance* inst = nullptr;
  CHECK(adnb_instance_parse("{", &inst) == ADNB_ERR_PARSE);
  CHECK(std::string(adnb_last_error()).find("JSON") != std::string::npos);
  CHECK(adnb_instance_parse(R"({"u":[[1]],"c":["-1"]})", &inst) == ADNB_ERR_INVALID);
  CHECK(adnb_instance_parse(R"({"u":[[1]],"c":["1/0"]})", &inst) == ADNB_ERR_PARSE);
  CHECK(adnb_instance_parse(nullptr, &inst) == ADNB_ERR_ARG);
  CHECK(inst == nullptr);
  REQUIRE(adnb_instance_parse(R"({"u":[[1]],"c":["0"]})", &inst) == ADNB_OK);
  CHECK(std::string(adnb_last_error()).empty());
  adnb_instance_free(inst);
}

TEST_CASE("C API: solve, inspect, re-check") {
  adnb_instance* inst = nullptr;
  REQUIRE(adnb_instance_parse(R"({"u":[[2]],"c":["1"]})", &inst) == ADNB_OK);
  CHECK(adnb_instance_buyers(inst) == 1);
  CHECK(adnb_instance_goods(inst) == 1);
  adnb_solve_options opt{2, 1, 1};
  adnb_result* res = nullptr;
  REQUIRE(adnb_solve(inst, &opt, &res) == ADNB_OK);
  CHECK(adnb_result_feasible(res) == 1);
  char* price = nullptr;
  REQUIRE(adnb_result_price(res, 0, &price) == ADNB_OK);
  CHECK(take(price) == "2");
  CHECK(adnb_result_price(res, 5, &price) == ADNB_ERR_ARG);

  char* doc = nullptr;
  REQUIRE(adnb_result_to_json(res, &doc) == ADNB_OK);
  std::string text = take(doc);
  json j = json::parse(text);
  CHECK(j["verdict"] == "feasible");
  CHECK(j["p"] == json::array({"2"}));
  CHECK(j["v"] == json::array({"2"}));
  CHECK(j["stats"].contains("price_history"));

  char* trace = nullptr;
  REQUIRE(adnb_result_trace(res, &trace) == ADNB_OK);
  std::string lines = take(trace);
  CHECK(lines.find("\"stage\":\"II\"") != std::string::npos);

  int verdict = -1;
  char* report = nullptr;
  REQUIRE(adnb_check_solution(nullptr, text.c_str(), &verdict, &report) == ADNB_OK);
  CHECK(verdict == 0);
  CHECK(json::parse(take(report))["verified"] == true);

  j["p"] = json::array({"3"});
  REQUIRE(adnb_check_solution(inst, j.dump().c_str(), &verdict, nullptr) == ADNB_OK);
  CHECK(verdict == 1);

  int agree = 0;
  char* cross = nullptr;
  REQUIRE(adnb_cross_check(res, 12, 1000, nullptr, &agree, &cross) == ADNB_OK);
  CHECK(agree == 1);
  CHECK(json::parse(take(cross))["oracle"]["ran"] == true);

  adnb_result_free(res);
  adnb_instance_free(inst);
}

TEST_CASE("C API: infeasible instance carries certificates") {
  adnb_instance* inst = nullptr;
  REQUIRE(adnb_instance_parse(R"({"u":[[1,0],[0,1]],"c":["2","0"]})", &inst) == ADNB_OK);
  adnb_result* res = nullptr;
  REQUIRE(adnb_solve(inst, nullptr, &res) == ADNB_OK);
  CHECK(adnb_result_feasible(res) == 0);
  char* price = nullptr;
  CHECK(adnb_result_price(res, 0, &price) == ADNB_ERR_ARG);
  char* doc = nullptr;
  REQUIRE(adnb_result_to_json(res, &doc) == ADNB_OK);
  std::string text = take(doc);
  json j = json::parse(text);
  CHECK(j["verdict"] == "infeasible");
  CHECK(j["certificate"]["lp"]["y"].size() == 2);
  int verdict = -1;
  REQUIRE(adnb_check_solution(nullptr, text.c_str(), &verdict, nullptr) == ADNB_OK);
  CHECK(verdict == 2);
  // Claiming infeasibility of a feasible instance with these certificates fails.
  j["instance"] = json::parse(R"({"u":[[1,0],[0,1]],"c":["0","0"]})");
  REQUIRE(adnb_check_solution(nullptr, j.dump().c_str(), &verdict, nullptr) == ADNB_OK);
  CHECK(verdict == 1);
  adnb_result_free(res);
  adnb_instance_free(inst);
}

TEST_CASE("C API: oracle, LP, limit, fisher, generators") {
  adnb_instance* inst = nullptr;
  REQUIRE(adnb_gen_random(5, 5, 3, 1, 7, &inst) == ADNB_OK);
  char* out = nullptr;
  CHECK(adnb_oracle(inst, 12, &out) == ADNB_ERR_CAP);
  adnb_instance_free(inst);

  REQUIRE(adnb_instance_parse(R"({"u":[[1],[1]],"c":["0","0"]})", &inst) == ADNB_OK);
  REQUIRE(adnb_oracle(inst, 12, &out) == ADNB_OK);
  json o = json::parse(take(out));
  CHECK(o["p"] == json::array({"2"}));
  CHECK(o["t_star"] == "1/2");
  REQUIRE(adnb_feasibility_lp(inst, &out) == ADNB_OK);
  CHECK(take(out) == "1/2");
  REQUIRE(adnb_limit(inst, 10, nullptr, nullptr, &out) == ADNB_OK);
  CHECK(json::parse(take(out))["iterations"] == 1);
  CHECK(adnb_limit(inst, 10, "0", nullptr, &out) == ADNB_ERR_INVALID);
  adnb_instance_free(inst);

  REQUIRE(adnb_fisher(R"({"u":[[2,1],[1,2]],"m":["1","1"]})", &out) == ADNB_OK);
  CHECK(json::parse(take(out))["p"] == json::array({"1", "1"}));

  REQUIRE(adnb_gen_l1(2, "1", "2", &out) == ADNB_OK);
  CHECK(json::parse(take(out))["money"] == json::array({"2", "1/2", "5/2"}));

  char* mapping = nullptr;
  REQUIRE(adnb_gen_wireless(R"({"pi":["1/2","1/2"],"rates":[[2,2]],"c":["0"]})", &inst, &mapping) == ADNB_OK);
  CHECK(json::parse(take(mapping))["M"] == "2");
  REQUIRE(adnb_instance_to_json(inst, &out) == ADNB_OK);
  CHECK(json::parse(take(out))["u"] == json::parse("[[2,2]]"));
  adnb_instance_free(inst);
}
