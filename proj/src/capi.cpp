#include "adnb/adnb.h"

#include <cstring>
#include <optional>
#include <string>

#include "adnb/fisher.hpp"
#include "adnb/oracle.hpp"
#include "adnb/solver.hpp"
#include "json_util.hpp"

struct adnb_instance {
  adnb::BargainingInstance inst;
};

struct adnb_result {
  adnb::BargainingInstance inst;
  adnb::SolveResult result;
};

namespace {

using adnb::Rational;
using adnb::to_string;
using adnb::detail::json;
using adnb::detail::to_json;

thread_local std::string last_error;

adnb_status fail(adnb_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

template <class F>
adnb_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const adnb::ParseError& e) {
    return fail(ADNB_ERR_PARSE, e.what());
  } catch (const adnb::InputError& e) {
    return fail(ADNB_ERR_INVALID, e.what());
  } catch (const adnb::InternalError& e) {
    return fail(ADNB_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (const json::exception& e) {
    return fail(ADNB_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ADNB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ADNB_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json index_list(const std::vector<bool>& mask) {
  json out = json::array();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) out.push_back(k);
  }
  return out;
}

std::vector<bool> mask_from(const json& j, std::size_t size, const char* what) {
  if (!j.is_array()) throw adnb::InputError(std::string(what) + ": expected an index array");
  std::vector<bool> out(size, false);
  for (const auto& e : j) {
    if (!e.is_number_unsigned() || e.get<std::size_t>() >= size) {
      throw adnb::InputError(std::string(what) + ": index out of range");
    }
    out[e.get<std::size_t>()] = true;
  }
  return out;
}

json instance_json(const adnb::BargainingInstance& inst) {
  return json{{"u", to_json(inst.u)}, {"c", to_json(inst.c)}};
}

json violations_json(const adnb::Violations& v) {
  return json{{"stage1_potential", v.stage1_potential}, {"stage2_potential", v.stage2_potential},
              {"stage1_iterations", v.stage1_iterations}, {"stage2_iterations", v.stage2_iterations},
              {"denominator", v.denominator},           {"tight_increase", v.tight_increase},
              {"tight_set", v.tight_set},               {"neighbour", v.neighbour},
              {"maxflow_budget", v.maxflow_budget}};
}

json stats_json(const adnb::SolveResult& r) {
  const adnb::RunStats& s = r.stats;
  json out{{"phases", s.stage1_phases + s.stage2_phases},
           {"iterations", s.stage1_iterations + s.stage2_iterations},
           {"maxflows", s.maxflows},
           {"stage1_phases", s.stage1_phases},
           {"stage2_phases", s.stage2_phases},
           {"stage1_iterations", s.stage1_iterations},
           {"stage2_iterations", s.stage2_iterations},
           {"max_stage1_phase_iterations", s.max_stage1_phase_iterations},
           {"max_stage2_phase_iterations", s.max_stage2_phase_iterations},
           {"restore_fallbacks", s.restore_fallbacks},
           {"maxflow_budget", r.budget.maxflow_budget.get_str()},
           {"violations", violations_json(s.violations)},
           {"notes", s.notes},
           {"params",
            {{"U", r.params.U.get_str()},
             {"C", to_string(r.params.C)},
             {"Delta", to_string(r.params.Delta)},
             {"mu", r.params.mu.get_str()}}}};
  json phases = json::array();
  for (const auto& ph : s.phases) {
    phases.push_back({{"stage", ph.stage}, {"phase", ph.phase}, {"iterations", ph.iterations},
                      {"phi_start", to_string(ph.phi_start)}, {"phi_end", to_string(ph.phi_end)},
                      {"end", ph.end_event}});
  }
  out["phase_log"] = std::move(phases);
  if (!s.price_history.empty()) out["price_history"] = to_json(s.price_history);
  return out;
}

json result_json(const adnb_result& res) {
  const adnb::SolveResult& r = res.result;
  json out;
  out["verdict"] = r.feasible ? "feasible" : "infeasible";
  out["instance"] = instance_json(res.inst);
  if (r.feasible) {
    out["p"] = to_json(r.solution.p);
    out["x"] = to_json(r.solution.x);
    out["v"] = to_json(r.solution.v);
    out["feasible_prices"] = to_json(r.feasible_prices);
  } else {
    out["certificate"] = {{"lp", {{"y", to_json(r.lp->y)}, {"z", to_json(r.lp->z)}}},
                          {"convex",
                           {{"buyers", index_list(r.convex->buyers)},
                            {"goods", index_list(r.convex->goods)},
                            {"p", to_json(r.convex->p)}}}};
  }
  out["preprocess"] = {{"removed_goods", r.report.removed_goods}, {"zero_buyers", r.report.zero_buyers}};
  out["stats"] = stats_json(r);
  return out;
}

json trace_record(const adnb::TraceRecord& t) {
  return json{{"stage", t.stage}, {"phase", t.phase}, {"iteration", t.iteration}, {"x", to_string(t.x)},
              {"event", t.event}, {"l1", to_string(t.l1)},     {"l2", to_string(t.l2)}};
}

const adnb::BargainingInstance& need(const adnb_instance* inst) {
  if (!inst) throw std::invalid_argument("null instance");
  return inst->inst;
}

}  // namespace

extern "C" {

const char* adnb_version(void) {
  return "1.0.0";
}

const char* adnb_last_error(void) {
  return last_error.c_str();
}

void adnb_string_free(char* s) {
  std::free(s);
}

adnb_status adnb_instance_parse(const char* text, adnb_instance** out) {
  if (!text || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new adnb_instance{adnb::parse_instance(text)};
    return ADNB_OK;
  });
}

adnb_status adnb_instance_to_json(const adnb_instance* inst, char** out) {
  if (!inst || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = dup(instance_json(inst->inst).dump());
    return ADNB_OK;
  });
}

size_t adnb_instance_buyers(const adnb_instance* inst) {
  return inst ? inst->inst.n() : 0;
}

size_t adnb_instance_goods(const adnb_instance* inst) {
  return inst ? inst->inst.g() : 0;
}

void adnb_instance_free(adnb_instance* inst) {
  delete inst;
}

adnb_status adnb_gen_random(size_t n, size_t g, int64_t U, int64_t Cmax, uint64_t seed, adnb_instance** out) {
  if (!out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = new adnb_instance{adnb::gen_random(n, g, U, Cmax, seed)};
    return ADNB_OK;
  });
}

adnb_status adnb_gen_wireless(const char* scenario_json, adnb_instance** out, char** mapping_json) {
  if (!scenario_json || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    adnb::WirelessMapping map = adnb::wireless_adapter(adnb::parse_wireless(scenario_json));
    if (mapping_json) *mapping_json = dup(json{{"M", map.M.get_str()}, {"pi", to_json(map.pi)}}.dump());
    *out = new adnb_instance{map.instance};
    return ADNB_OK;
  });
}

adnb_status adnb_gen_l1(size_t n, const char* delta, const char* H, char** out_json) {
  if (!delta || !H || !out_json) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    adnb::L1Config cfg = adnb::gen_l1_adversarial(n, adnb::parse_rational(delta), adnb::parse_rational(H));
    *out_json = dup(json{{"u", to_json(cfg.u)}, {"money", to_json(cfg.money)}, {"price", to_json(cfg.price)}}.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_solve(const adnb_instance* inst, const adnb_solve_options* options, adnb_result** out) {
  if (!inst || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    adnb::SolveOptions opt;
    if (options) {
      opt.check_level = options->check_level;
      opt.trace = options->trace != 0;
      opt.record_prices = options->record_prices != 0;
    }
    auto* res = new adnb_result{inst->inst, {}};
    try {
      res->result = adnb::solve(inst->inst, opt);
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
    return ADNB_OK;
  });
}

int adnb_result_feasible(const adnb_result* res) {
  return res && res->result.feasible ? 1 : 0;
}

adnb_status adnb_result_to_json(const adnb_result* res, char** out) {
  if (!res || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    *out = dup(result_json(*res).dump());
    return ADNB_OK;
  });
}

adnb_status adnb_result_trace(const adnb_result* res, char** out) {
  if (!res || !out) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    std::string lines;
    for (const auto& t : res->result.stats.trace) lines += trace_record(t).dump() + "\n";
    *out = dup(lines);
    return ADNB_OK;
  });
}

adnb_status adnb_result_price(const adnb_result* res, size_t good, char** out) {
  if (!res || !out) return fail(ADNB_ERR_ARG, "null argument");
  if (!res->result.feasible) return fail(ADNB_ERR_ARG, "instance is infeasible; no prices");
  if (good >= res->result.solution.p.size()) return fail(ADNB_ERR_ARG, "good index out of range");
  return guarded([&] {
    *out = dup(adnb::to_string(res->result.solution.p[good]));
    return ADNB_OK;
  });
}

void adnb_result_free(adnb_result* res) {
  delete res;
}

adnb_status adnb_check_solution(const adnb_instance* inst, const char* solution_json, int* verdict,
                                char** report_json) {
  if (!solution_json || !verdict) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    json doc = adnb::detail::parse_json(solution_json);
    if (!doc.is_object() || !doc.contains("verdict")) throw adnb::InputError("solution document needs \"verdict\"");
    adnb::BargainingInstance instance;
    if (inst) {
      instance = inst->inst;
    } else {
      if (!doc.contains("instance")) throw adnb::InputError("solution has no embedded instance");
      instance = adnb::parse_instance(doc["instance"].dump());
    }
    const std::size_t n = instance.n(), g = instance.g();
    json report = json::object();
    bool ok = false;
    const std::string claimed = doc["verdict"].get<std::string>();
    if (claimed == "feasible") {
      std::vector<Rational> p = adnb::detail::rational_vector(doc.at("p"), "p");
      adnb::Allocation x = adnb::detail::rational_matrix(doc.at("x"), "x");
      if (p.size() != g || x.size() != n) throw adnb::InputError("solution dimensions do not match the instance");
      adnb::EquilibriumCheck eq = adnb::check_equilibrium(instance, p);
      std::string why;
      bool kkt = adnb::check_kkt(instance, p, x, &why);
      bool v_ok = true;
      if (doc.contains("v")) {
        std::vector<Rational> v = adnb::detail::rational_vector(doc["v"], "v");
        if (v.size() != n) {
          v_ok = false;
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            Rational got = 0;
            for (std::size_t j = 0; j < g; ++j) got += Rational(instance.u[i][j]) * x[i][j];
            v_ok &= got == v[i];
          }
        }
      }
      report["equilibrium"] = eq.ok;
      if (!eq.ok) report["equilibrium_reason"] = eq.reason;
      report["kkt"] = kkt;
      if (!kkt) report["kkt_reason"] = why;
      report["utilities"] = v_ok;
      ok = eq.ok && kkt && v_ok;
      *verdict = ok ? 0 : 1;
    } else if (claimed == "infeasible") {
      const json& cert = doc.at("certificate");
      adnb::LPDualCertificate lp{adnb::detail::rational_vector(cert.at("lp").at("y"), "y"),
                                 adnb::detail::rational_vector(cert.at("lp").at("z"), "z")};
      adnb::ConvexDualCertificate convex{mask_from(cert.at("convex").at("buyers"), n, "buyers"),
                                         mask_from(cert.at("convex").at("goods"), g, "goods"),
                                         adnb::detail::rational_vector(cert.at("convex").at("p"), "p")};
      bool lp_ok = adnb::verify_lp_dual(instance, lp);
      bool cv_ok = adnb::verify_convex_dual(instance, convex);
      report["lp_dual"] = lp_ok;
      report["convex_dual"] = cv_ok;
      ok = lp_ok && cv_ok;
      *verdict = ok ? 2 : 1;
    } else {
      throw adnb::InputError("verdict must be \"feasible\" or \"infeasible\"");
    }
    report["verified"] = ok;
    if (report_json) *report_json = dup(report.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_oracle(const adnb_instance* inst, size_t cap, char** out_json) {
  if (!inst || !out_json) return fail(ADNB_ERR_ARG, "null argument");
  try {
    adnb::validate(inst->inst);
    if (inst->inst.n() * inst->inst.g() > cap) {
      return fail(ADNB_ERR_CAP, "oracle cap exceeded: n*g = " + std::to_string(inst->inst.n() * inst->inst.g()) +
                                    " > " + std::to_string(cap));
    }
  } catch (const adnb::InputError& e) {
    return fail(ADNB_ERR_INVALID, e.what());
  }
  return guarded([&] {
    adnb::OracleResult o = adnb::oracle_solve(need(inst), cap);
    json out{{"verdict", o.feasible ? "feasible" : "infeasible"}, {"supports_tried", o.supports_tried}};
    if (o.feasible) {
      out["p"] = to_json(o.p);
      out["x"] = to_json(o.x);
      out["v"] = to_json(o.v);
    }
    out["t_star"] = to_string(adnb::feasibility_lp(inst->inst));
    *out_json = dup(out.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_feasibility_lp(const adnb_instance* inst, char** t_star) {
  if (!inst || !t_star) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    *t_star = dup(to_string(adnb::feasibility_lp(inst->inst)));
    return ADNB_OK;
  });
}

adnb_status adnb_limit(const adnb_instance* inst, size_t max_iter, const char* eps, const char* reference_json,
                       char** out_json) {
  if (!inst || !out_json) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    Rational e = eps ? adnb::parse_rational(eps) : adnb::default_limit_eps();
    if (e <= 0) throw adnb::InputError("eps must be positive");
    std::optional<std::vector<Rational>> ref;
    if (reference_json) ref = adnb::detail::rational_vector(adnb::detail::parse_json(reference_json), "reference");
    adnb::LimitResult r = adnb::limit_algorithm(inst->inst, max_iter, e, ref ? &*ref : nullptr);
    json out{{"p", to_json(r.p)},
             {"m", to_json(r.m)},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"exact", r.exact},
             {"eps", to_string(e)},
             {"stop_rule", ref ? "distance to reference prices" : "max change in money"},
             {"p_history", to_json(r.p_history)},
             {"m_history", to_json(r.m_history)}};
    *out_json = dup(out.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_cross_check(const adnb_result* res, size_t cap, size_t max_iter, const char* eps, int* agree,
                             char** report_json) {
  if (!res || !agree) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    const adnb::BargainingInstance& inst = res->inst;
    const adnb::SolveResult& r = res->result;
    const std::size_t n = inst.n(), g = inst.g();
    Rational e = eps ? adnb::parse_rational(eps) : adnb::default_limit_eps();
    if (e <= 0) throw adnb::InputError("eps must be positive");
    bool all = true;
    json report = json::object();

    if (n * g <= cap) {
      adnb::OracleResult o = adnb::oracle_solve(inst, cap);
      bool ok = o.feasible == r.feasible && (!o.feasible || (o.p == r.solution.p && o.v == r.solution.v));
      report["oracle"] = {{"ran", true}, {"verdict", o.feasible ? "feasible" : "infeasible"}, {"agree", ok}};
      all &= ok;
    } else {
      report["oracle"] = {{"ran", false}, {"reason", "n*g above cap"}};
    }

    Rational t = adnb::feasibility_lp(inst);
    bool lp_ok = (t > 0) == r.feasible;
    report["feasibility_lp"] = {{"t_star", to_string(t)}, {"agree", lp_ok}};
    all &= lp_ok;

    if (!r.feasible) {
      report["limit"] = {{"ran", false}, {"reason", "infeasible instance"}};
    } else {
      const std::vector<Rational>& p = r.solution.p;
      adnb::LimitResult lr = adnb::limit_algorithm(inst, max_iter, e, &p);
      // money at the equilibrium: m_i = 1 + c_i / gamma_i
      std::vector<Rational> m_star(n, Rational(1));
      for (std::size_t i = 0; i < n; ++i) {
        Rational gamma = 0;
        for (std::size_t j = 0; j < g; ++j) {
          if (p[j] > 0) gamma = std::max<Rational>(gamma, Rational(inst.u[i][j]) / p[j]);
        }
        m_star[i] += inst.c[i] / gamma;
      }
      bool monotone = true, dominated = true;
      auto check = [&](const std::vector<std::vector<Rational>>& hist, const std::vector<Rational>& cap_vec) {
        for (std::size_t k = 0; k < hist.size(); ++k) {
          for (std::size_t j = 0; j < hist[k].size(); ++j) {
            if (k > 0 && hist[k][j] < hist[k - 1][j]) monotone = false;
            if (hist[k][j] > cap_vec[j]) dominated = false;
          }
        }
      };
      check(lr.p_history, p);
      check(lr.m_history, m_star);
      bool ok = monotone && dominated && lr.reached_reference;
      report["limit"] = {{"ran", true},          {"iterations", lr.iterations}, {"within_eps", lr.reached_reference},
                         {"monotone", monotone}, {"dominated", dominated},      {"eps", to_string(e)},
                         {"agree", ok}};
      all &= ok;
    }
    *agree = all ? 1 : 0;
    report["agree"] = all;
    if (report_json) *report_json = dup(report.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_fisher(const char* market_json, char** out_json) {
  if (!market_json || !out_json) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    json doc = adnb::detail::parse_json(market_json);
    if (!doc.is_object() || !doc.contains("u") || !doc.contains("m")) {
      throw adnb::InputError("market document needs \"u\" and \"m\"");
    }
    adnb::FisherMarket market{adnb::detail::integer_matrix(doc["u"], "u"), adnb::detail::rational_vector(doc["m"], "m")};
    adnb::FisherResult r = adnb::fisher_equilibrium(market);
    json out{{"p", to_json(r.p)}, {"x", to_json(r.x)}, {"phases", r.stats.stage2_phases}, {"maxflows", r.stats.maxflows}};
    *out_json = dup(out.dump());
    return ADNB_OK;
  });
}

adnb_status adnb_l1_measure(size_t n, const char* delta, const char* H, char** out_json) {
  if (!delta || !H || !out_json) return fail(ADNB_ERR_ARG, "null argument");
  return guarded([&] {
    adnb::L1Config cfg = adnb::gen_l1_adversarial(n, adnb::parse_rational(delta), adnb::parse_rational(H));
    adnb::L1Measurement m = adnb::measure_l1_vs_l2(cfg);
    json events = json::array();
    for (const auto& t : m.events) events.push_back(trace_record(t));
    json out{{"l1_start", to_string(m.l1_start)}, {"l1_end", to_string(m.l1_end)},
             {"l1_drop", to_string(m.l1_drop)},   {"l2_start", to_string(m.l2_start)},
             {"l2_end", to_string(m.l2_end)},     {"l2_ratio", to_string(m.l2_ratio)},
             {"events", events},                  {"prices_after", to_json(m.prices_after)}};
    *out_json = dup(out.dump());
    return ADNB_OK;
  });
}

}  // extern "C"
