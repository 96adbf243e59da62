#ifndef ADNB_ADNB_H
#define ADNB_ADNB_H

#include <stddef.h>
#include <stdint.h>

#if defined(ADNB_BUILDING)
#define ADNB_API __attribute__((visibility("default")))
#else
#define ADNB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every rational crosses this boundary as a decimal string "n" or "n/d". */

typedef enum adnb_status {
  ADNB_OK = 0,
  ADNB_ERR_PARSE = 1,     /* malformed JSON or number */
  ADNB_ERR_INVALID = 2,   /* well-formed but out of domain */
  ADNB_ERR_CAP = 3,       /* oracle size cap exceeded */
  ADNB_ERR_INTERNAL = 4,  /* internal safety bound tripped: a solver defect */
  ADNB_ERR_ARG = 5        /* null pointer or bad argument */
} adnb_status;

typedef struct adnb_instance adnb_instance;
typedef struct adnb_result adnb_result;

typedef struct adnb_solve_options {
  int check_level;   /* < 0: take ADNB_CHECK_LEVEL from the environment, default 1 */
  int trace;
  int record_prices;
} adnb_solve_options;

ADNB_API const char* adnb_version(void);

/* Message for the last failing call on this thread; empty if none. */
ADNB_API const char* adnb_last_error(void);

/* Frees strings returned through char** out-parameters. */
ADNB_API void adnb_string_free(char* s);

/* {"u": [[int,...],...], "c": ["rational",...]} */
ADNB_API adnb_status adnb_instance_parse(const char* json, adnb_instance** out);
ADNB_API adnb_status adnb_instance_to_json(const adnb_instance* inst, char** out);
ADNB_API size_t adnb_instance_buyers(const adnb_instance* inst);
ADNB_API size_t adnb_instance_goods(const adnb_instance* inst);
ADNB_API void adnb_instance_free(adnb_instance* inst);

ADNB_API adnb_status adnb_gen_random(size_t n, size_t g, int64_t U, int64_t Cmax, uint64_t seed,
                                     adnb_instance** out);
/* Wireless scenario {"pi": [...], "rates": [[...]], "c": [...]}. The mapping
   (scale M and pi) is written to mapping_json when it is not NULL. */
ADNB_API adnb_status adnb_gen_wireless(const char* scenario_json, adnb_instance** out, char** mapping_json);
/* Fixed-money Fisher configuration {"u", "money", "price"}. */
ADNB_API adnb_status adnb_gen_l1(size_t n, const char* delta, const char* H, char** out_json);

ADNB_API adnb_status adnb_solve(const adnb_instance* inst, const adnb_solve_options* options,
                                adnb_result** out);
ADNB_API int adnb_result_feasible(const adnb_result* res);
/* Full solution document, instance included. */
ADNB_API adnb_status adnb_result_to_json(const adnb_result* res, char** out);
/* One JSON object per line and event. */
ADNB_API adnb_status adnb_result_trace(const adnb_result* res, char** out);
ADNB_API adnb_status adnb_result_price(const adnb_result* res, size_t good, char** out);
ADNB_API void adnb_result_free(adnb_result* res);

/* Re-verifies a solution document against inst (or its embedded instance when
   inst is NULL). *verdict: 0 verified feasible, 2 verified infeasible,
   1 rejected. The report names what failed. */
ADNB_API adnb_status adnb_check_solution(const adnb_instance* inst, const char* solution_json, int* verdict,
                                         char** report_json);

ADNB_API adnb_status adnb_oracle(const adnb_instance* inst, size_t cap, char** out_json);
ADNB_API adnb_status adnb_feasibility_lp(const adnb_instance* inst, char** t_star);
/* eps NULL: 1/1000000. reference_json, when not NULL, is a price array; the
   run then stops once prices are within eps of it. */
ADNB_API adnb_status adnb_limit(const adnb_instance* inst, size_t max_iter, const char* eps,
                                const char* reference_json, char** out_json);
/* Runs the enumeration oracle (when n*g <= cap), the feasibility LP and the
   limit iteration against a finished solve. The limit run stops once prices
   are within eps of the solver's (eps NULL: 1/1000000). *agree is 1 when
   every comparison that ran agrees. */
ADNB_API adnb_status adnb_cross_check(const adnb_result* res, size_t cap, size_t max_iter, const char* eps,
                                      int* agree, char** report_json);
/* Fixed-money Fisher equilibrium for {"u", "m"}. */
ADNB_API adnb_status adnb_fisher(const char* market_json, char** out_json);
/* One instrumented price-raising phase on the l1 family. */
ADNB_API adnb_status adnb_l1_measure(size_t n, const char* delta, const char* H, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
