#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "adnb/adnb.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Failure {
  std::string message;
  int code = kExitError;
};

struct CString {
  char* ptr = nullptr;
  ~CString() { adnb_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct InstanceDeleter {
  void operator()(adnb_instance* p) const { adnb_instance_free(p); }
};
struct ResultDeleter {
  void operator()(adnb_result* p) const { adnb_result_free(p); }
};
using InstancePtr = std::unique_ptr<adnb_instance, InstanceDeleter>;
using ResultPtr = std::unique_ptr<adnb_result, ResultDeleter>;

void expect(adnb_status st, const std::string& what) {
  if (st == ADNB_OK) return;
  std::string msg = what + ": " + adnb_last_error();
  if (st == ADNB_ERR_INTERNAL) msg += " (solver defect, please report the input)";
  throw Failure{msg};
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{"cannot write " + path};
  out << text;
  if (!out) throw Failure{"write failed for " + path};
}

std::string pretty(const std::string& compact) {
  return json::parse(compact).dump(2) + "\n";
}

struct InputSpec {
  std::string path;
  std::string inline_json;
};

void add_input(CLI::App* cmd, InputSpec& in) {
  cmd->add_option("input", in.path, "Instance JSON file, or - for stdin");
  cmd->add_option("--json", in.inline_json, "Instance given inline");
}

InstancePtr load_instance(const InputSpec& in) {
  if (in.path.empty() == in.inline_json.empty()) throw Failure{"give exactly one of an input path or --json"};
  std::string text = in.inline_json.empty() ? read_text(in.path) : in.inline_json;
  adnb_instance* raw = nullptr;
  expect(adnb_instance_parse(text.c_str(), &raw), "instance");
  return InstancePtr(raw);
}

const char* opt_cstr(const std::string& s) {
  return s.empty() ? nullptr : s.c_str();
}

struct SolveArgs {
  InputSpec input;
  std::string output;
  std::string trace;
  int check_level = -1;
  bool record_prices = false;
  bool cross_check = false;
  std::size_t cap = 12;
  std::size_t max_iter = 10000;
  std::string eps;
};

int run_solve(const SolveArgs& a) {
  InstancePtr inst = load_instance(a.input);
  adnb_solve_options opt{a.check_level, a.trace.empty() ? 0 : 1, a.record_prices ? 1 : 0};
  adnb_result* raw = nullptr;
  expect(adnb_solve(inst.get(), &opt, &raw), "solve");
  ResultPtr res(raw);

  CString doc;
  expect(adnb_result_to_json(res.get(), &doc.ptr), "solution");
  json out = json::parse(doc.str());

  if (!a.trace.empty()) {
    CString lines;
    expect(adnb_result_trace(res.get(), &lines.ptr), "trace");
    write_text(a.trace, lines.str());
  }

  bool agree = true;
  if (a.cross_check) {
    int ok = 0;
    CString report;
    expect(adnb_cross_check(res.get(), a.cap, a.max_iter, opt_cstr(a.eps), &ok, &report.ptr), "cross-check");
    out["cross_check"] = json::parse(report.str());
    agree = ok != 0;
  }
  write_text(a.output, out.dump(2) + "\n");
  if (!agree) {
    std::cerr << "cross-check disagreement: " << out["cross_check"].dump() << "\n";
    return kExitError;
  }
  return adnb_result_feasible(res.get()) ? kExitOk : kExitInfeasible;
}

struct CheckArgs {
  std::string solution;
  std::string instance;
  std::string output;
};

int run_check(const CheckArgs& a) {
  std::string text = read_text(a.solution);
  InstancePtr inst;
  if (!a.instance.empty()) {
    adnb_instance* raw = nullptr;
    expect(adnb_instance_parse(read_text(a.instance).c_str(), &raw), "instance");
    inst.reset(raw);
  }
  int verdict = kExitError;
  CString report;
  expect(adnb_check_solution(inst.get(), text.c_str(), &verdict, &report.ptr), "check");
  write_text(a.output, pretty(report.str()));
  if (verdict == kExitError) std::cerr << "solution rejected\n";
  return verdict;
}

struct OracleArgs {
  InputSpec input;
  std::string output;
  std::size_t cap = 12;
};

int run_oracle(const OracleArgs& a) {
  InstancePtr inst = load_instance(a.input);
  CString out;
  adnb_status st = adnb_oracle(inst.get(), a.cap, &out.ptr);
  if (st == ADNB_ERR_CAP) throw Failure{std::string(adnb_last_error()) + "; raise --cap to force enumeration"};
  expect(st, "oracle");
  json doc = json::parse(out.str());
  write_text(a.output, doc.dump(2) + "\n");
  return doc["verdict"] == "feasible" ? kExitOk : kExitInfeasible;
}

struct LimitArgs {
  InputSpec input;
  std::string output;
  std::size_t max_iter = 10000;
  std::string eps;
  std::string reference;
};

int run_limit(const LimitArgs& a) {
  InstancePtr inst = load_instance(a.input);
  std::string ref = a.reference.empty() ? "" : read_text(a.reference);
  if (!ref.empty()) {
    json r = json::parse(ref);
    if (r.is_object() && r.contains("p")) ref = r["p"].dump();
  }
  CString out;
  expect(adnb_limit(inst.get(), a.max_iter, opt_cstr(a.eps), opt_cstr(ref), &out.ptr), "limit");
  write_text(a.output, pretty(out.str()));
  return kExitOk;
}

struct GenArgs {
  std::string output;
  std::size_t n = 3, g = 3;
  std::int64_t U = 10, C = 10;
  std::uint64_t seed = 1;
  std::string delta = "1";
  std::string H;
  bool measure = false;
  std::string scenario;
  std::string mapping;
};

int run_gen_random(const GenArgs& a) {
  adnb_instance* raw = nullptr;
  expect(adnb_gen_random(a.n, a.g, a.U, a.C, a.seed, &raw), "gen random");
  InstancePtr inst(raw);
  CString out;
  expect(adnb_instance_to_json(inst.get(), &out.ptr), "gen random");
  write_text(a.output, pretty(out.str()));
  return kExitOk;
}

int run_gen_l1(const GenArgs& a) {
  std::string H = a.H.empty() ? std::to_string(a.n) : a.H;
  CString out;
  if (a.measure) {
    expect(adnb_l1_measure(a.n, a.delta.c_str(), H.c_str(), &out.ptr), "gen l1adv");
  } else {
    expect(adnb_gen_l1(a.n, a.delta.c_str(), H.c_str(), &out.ptr), "gen l1adv");
  }
  write_text(a.output, pretty(out.str()));
  return kExitOk;
}

int run_gen_wireless(const GenArgs& a) {
  std::string text = read_text(a.scenario);
  adnb_instance* raw = nullptr;
  CString mapping;
  expect(adnb_gen_wireless(text.c_str(), &raw, a.mapping.empty() ? nullptr : &mapping.ptr), "gen wireless");
  InstancePtr inst(raw);
  CString out;
  expect(adnb_instance_to_json(inst.get(), &out.ptr), "gen wireless");
  write_text(a.output, pretty(out.str()));
  if (!a.mapping.empty()) write_text(a.mapping, pretty(mapping.str()));
  return kExitOk;
}

struct BenchArgs {
  std::string output;
  std::size_t n = 5, g = 5;
  std::int64_t U = 10, C = 10;
  std::uint64_t seed = 1;
  std::size_t count = 20;
  unsigned jobs = 1;
  int check_level = -1;
};

struct BenchRow {
  std::uint64_t seed = 0;
  std::string line;
  std::string error;
};

BenchRow bench_one(const BenchArgs& a, std::uint64_t seed) {
  BenchRow row{seed, {}, {}};
  adnb_instance* raw_inst = nullptr;
  if (adnb_gen_random(a.n, a.g, a.U, a.C, seed, &raw_inst) != ADNB_OK) {
    row.error = adnb_last_error();
    return row;
  }
  InstancePtr inst(raw_inst);
  adnb_solve_options opt{a.check_level, 0, 0};
  adnb_result* raw = nullptr;
  if (adnb_solve(inst.get(), &opt, &raw) != ADNB_OK) {
    row.error = adnb_last_error();
    return row;
  }
  ResultPtr res(raw);
  CString doc;
  if (adnb_result_to_json(res.get(), &doc.ptr) != ADNB_OK) {
    row.error = adnb_last_error();
    return row;
  }
  json r = json::parse(doc.str());
  const json& s = r["stats"];
  std::size_t other = 0;
  for (const auto& [key, count] : s["violations"].items()) {
    if (key != "denominator") other += count.get<std::size_t>();
  }
  std::ostringstream line;
  line << seed << ',' << r["verdict"].get<std::string>() << ',' << s["stage1_phases"] << ',' << s["stage2_phases"]
       << ',' << s["iterations"] << ',' << s["max_stage1_phase_iterations"] << ','
       << s["max_stage2_phase_iterations"] << ',' << s["maxflows"] << ',' << s["maxflow_budget"].get<std::string>()
       << ',' << s["violations"]["denominator"] << ',' << other;
  row.line = line.str();
  return row;
}

int run_bench(const BenchArgs& a) {
  std::vector<BenchRow> rows(a.count);
  const unsigned jobs = std::max(1u, a.jobs);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < a.count; k += jobs) rows[k] = bench_one(a, a.seed + k);
    });
  }
  for (auto& t : pool) t.join();

  std::ostringstream out;
  out << "# n=" << a.n << " g=" << a.g << " U=" << a.U << " C=" << a.C << " stage1 cap/phase=" << a.n * a.g
      << " stage2 cap/phase=" << a.g << "\n";
  out << "seed,verdict,stage1_phases,stage2_phases,iterations,max_stage1_phase_iter,max_stage2_phase_iter,"
         "maxflows,maxflow_budget,denominator_violations,other_violations\n";
  int status = kExitOk;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      out << row.seed << ",error,,,,,,,,,\n";
      std::cerr << "seed " << row.seed << ": " << row.error << "\n";
      status = kExitError;
    } else {
      out << row.line << "\n";
    }
  }
  write_text(a.output, out.str());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash bargaining solver for linear Arrow-Debreu economies with disagreement utilities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(adnb_version()));

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Solve an instance; exit 0 feasible, 2 infeasible");
  add_input(cmd_solve, solve.input);
  cmd_solve->add_option("-o,--output", solve.output, "Solution file (default stdout)");
  cmd_solve->add_option("--trace", solve.trace, "Write a JSONL event trace here (- for stdout)");
  cmd_solve->add_option("--check-level", solve.check_level,
                        "2 audits balance and bang-per-buck after every event; default from ADNB_CHECK_LEVEL, else 1");
  cmd_solve->add_flag("--record-prices", solve.record_prices, "Keep the price vector after every event");
  cmd_solve->add_flag("--cross-check", solve.cross_check, "Compare with the oracle, the LP and the limit iteration");
  cmd_solve->add_option("--cap", solve.cap, "Oracle cap on n*g for --cross-check");
  cmd_solve->add_option("--max-iter", solve.max_iter, "Limit iteration cap for --cross-check");
  cmd_solve->add_option("--eps", solve.eps, "Limit tolerance for --cross-check, e.g. 1/1000000");

  CheckArgs check;
  auto* cmd_check = app.add_subcommand("check", "Re-verify a stored solution; exit 0 feasible, 2 infeasible, 1 rejected");
  cmd_check->add_option("solution", check.solution, "Solution JSON, or - for stdin")->required();
  cmd_check->add_option("--instance", check.instance, "Verify against this instance instead of the embedded one");
  cmd_check->add_option("-o,--output", check.output, "Report file (default stdout)");

  OracleArgs oracle;
  auto* cmd_oracle = app.add_subcommand("oracle", "Brute-force support enumeration for small instances");
  add_input(cmd_oracle, oracle.input);
  cmd_oracle->add_option("-o,--output", oracle.output, "Output file (default stdout)");
  cmd_oracle->add_option("--cap", oracle.cap, "Largest n*g to enumerate");

  LimitArgs limit;
  auto* cmd_limit = app.add_subcommand("limit", "Iterate Fisher prices and flexible money to a fixed point");
  add_input(cmd_limit, limit.input);
  cmd_limit->add_option("-o,--output", limit.output, "Output file (default stdout)");
  cmd_limit->add_option("--max-iter", limit.max_iter, "Iteration cap");
  cmd_limit->add_option("--eps", limit.eps, "Stop when money moves less than this (default 1/1000000)");
  cmd_limit->add_option("--reference", limit.reference,
                        "Price array or solution file; stop once within eps of its prices");

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate instances");
  cmd_gen->require_subcommand(1);
  auto* gen_random = cmd_gen->add_subcommand("random", "Uniform random instance");
  gen_random->add_option("--n", gen.n, "Buyers");
  gen_random->add_option("--g", gen.g, "Goods");
  gen_random->add_option("--U", gen.U, "Largest utility");
  gen_random->add_option("--C", gen.C, "Largest disagreement utility");
  gen_random->add_option("--seed", gen.seed, "Seed");
  gen_random->add_option("-o,--output", gen.output, "Output file (default stdout)");
  auto* gen_l1 = cmd_gen->add_subcommand("l1adv", "Fixed-money configuration where surplus l1 progress stalls");
  gen_l1->add_option("--n", gen.n, "Buyers");
  gen_l1->add_option("--delta", gen.delta, "Surplus scale");
  gen_l1->add_option("--H", gen.H, "Price level (default n)");
  gen_l1->add_flag("--measure", gen.measure, "Run one instrumented phase and report l1 and l2 progress");
  gen_l1->add_option("-o,--output", gen.output, "Output file (default stdout)");
  auto* gen_wireless = cmd_gen->add_subcommand("wireless", "Instance from a wireless rate scenario");
  gen_wireless->add_option("scenario", gen.scenario, "Scenario JSON {pi, rates, c}")->required();
  gen_wireless->add_option("--mapping", gen.mapping, "Write the scale and priorities here");
  gen_wireless->add_option("-o,--output", gen.output, "Output file (default stdout)");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Solve a batch of random seeds and tabulate work against the budget");
  cmd_bench->add_option("--n", bench.n, "Buyers");
  cmd_bench->add_option("--g", bench.g, "Goods");
  cmd_bench->add_option("--U", bench.U, "Largest utility");
  cmd_bench->add_option("--C", bench.C, "Largest disagreement utility");
  cmd_bench->add_option("--seed", bench.seed, "First seed");
  cmd_bench->add_option("--count", bench.count, "Number of seeds");
  cmd_bench->add_option("--jobs", bench.jobs, "Worker threads");
  cmd_bench->add_option("--check-level", bench.check_level, "Invariant check level");
  cmd_bench->add_option("-o,--output", bench.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_check) return run_check(check);
    if (*cmd_oracle) return run_oracle(oracle);
    if (*cmd_limit) return run_limit(limit);
    if (*gen_random) return run_gen_random(gen);
    if (*gen_l1) return run_gen_l1(gen);
    if (*gen_wireless) return run_gen_wireless(gen);
    if (*cmd_bench) return run_bench(bench);
  } catch (const Failure& f) {
    std::cerr << "adnb: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "adnb: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
