// Exercises the shared library strictly through eifeval.h.
#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "eifeval/eifeval.h"

namespace {

std::string data_path(const std::string& name) { return std::string(EIFEVAL_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
  return "/tmp/eifeval_capi_" + std::to_string(::getpid()) + "_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Config {
  eif_config* raw = nullptr;
  Config() { EXPECT_EQ(eif_config_create(&raw), EIF_OK); }
  ~Config() { eif_config_destroy(raw); }
};

TEST(CApi, StatusAndMethodNames) {
  EXPECT_STREQ(eif_status_string(EIF_OK), "ok");
  EXPECT_STREQ(eif_status_string(EIF_ERR_CONTRACT), "contract violation");
  EXPECT_STREQ(eif_method_name(EIF_METHOD_ONE_STEP_FIXED), "one_step_fixed");
  EXPECT_STREQ(eif_method_name(EIF_METHOD_ONE_STEP_ORACLE), "one_step_oracle");
  EXPECT_STREQ(eif_version(), "1.0.0");
}

TEST(CApi, ConfigSettersValidateAndReportErrors) {
  Config c;
  EXPECT_EQ(eif_config_validate(c.raw), EIF_OK);
  EXPECT_EQ(eif_config_set_level(c.raw, 1.5), EIF_ERR_INVALID_INPUT);
  EXPECT_NE(std::string(eif_last_error()).find("level"), std::string::npos);
  EXPECT_EQ(eif_config_set_level(c.raw, 0.9), EIF_OK);
  EXPECT_STREQ(eif_last_error(), "");
  double level = 0.0;
  EXPECT_EQ(eif_config_get_level(c.raw, &level), EIF_OK);
  EXPECT_EQ(level, 0.9);

  EXPECT_EQ(eif_config_set_rho(c.raw, 0.7, 0.5), EIF_OK);
  double r1 = 0.0;
  double r2 = 0.0;
  EXPECT_EQ(eif_config_get_rho(c.raw, &r1, &r2), EIF_OK);
  EXPECT_EQ(r1, 0.7);
  EXPECT_EQ(r2, 0.5);

  EXPECT_EQ(eif_config_set_folds(c.raw, 1), EIF_OK);
  EXPECT_EQ(eif_config_validate(c.raw), EIF_ERR_INVALID_FOLDS);
  EXPECT_EQ(eif_config_set_folds(c.raw, 5), EIF_OK);
  EXPECT_EQ(eif_config_set_sigma_sq(c.raw, nullptr, 0), EIF_ERR_INVALID_INPUT);
  EXPECT_EQ(eif_config_set_model_index(c.raw, 7), EIF_OK);
  EXPECT_EQ(eif_config_validate(c.raw), EIF_ERR_INVALID_INPUT);

  EXPECT_EQ(eif_config_validate(nullptr), EIF_ERR_INVALID_INPUT);
  EXPECT_EQ(eif_config_set_n(nullptr, 3), EIF_ERR_INVALID_INPUT);
}

TEST(CApi, LoadJsonConfig) {
  const auto path = temp_path("cfg.json");
  std::ofstream(path) << R"({"mode":"estimate","input":"x.jsonl","seed":3})";
  eif_config* cfg = nullptr;
  ASSERT_EQ(eif_config_load_json(path.c_str(), &cfg), EIF_OK);
  eif_mode mode = EIF_MODE_SIMULATE;
  EXPECT_EQ(eif_config_get_mode(cfg, &mode), EIF_OK);
  EXPECT_EQ(mode, EIF_MODE_ESTIMATE);
  const char* input = nullptr;
  EXPECT_EQ(eif_config_get_input(cfg, &input), EIF_OK);
  EXPECT_STREQ(input, "x.jsonl");
  eif_config_destroy(cfg);

  std::ofstream(path) << R"({"sed":3})";
  cfg = nullptr;
  EXPECT_EQ(eif_config_load_json(path.c_str(), &cfg), EIF_ERR_CONTRACT);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_EQ(eif_config_load_json("/no/such/config.json", &cfg), EIF_ERR_IO);
  std::remove(path.c_str());
}

TEST(CApi, SimulateIsDeterministic) {
  Config c;
  eif_config_set_n(c.raw, 200);
  eif_config_set_mc_samples(c.raw, 20);
  eif_config_set_seed(c.raw, 7);
  eif_report a_naive{};
  eif_report a_one{};
  eif_report b_naive{};
  eif_report b_one{};
  ASSERT_EQ(eif_simulate(c.raw, &a_naive, &a_one), EIF_OK);
  ASSERT_EQ(eif_simulate(c.raw, &b_naive, &b_one), EIF_OK);
  EXPECT_EQ(a_naive.method, EIF_METHOD_NAIVE);
  EXPECT_EQ(a_one.method, EIF_METHOD_ONE_STEP_CROSSFIT);
  EXPECT_EQ(a_one.theta_hat, b_one.theta_hat);
  EXPECT_EQ(a_naive.theta_hat, b_naive.theta_hat);
  EXPECT_EQ(a_one.n, 200u);
  EXPECT_EQ(a_one.m, 20u);
  EXPECT_EQ(a_one.k, 5u);
}

TEST(CApi, RankSummaries) {
  Config c;
  eif_config_set_n(c.raw, 100);
  eif_config_set_mc_samples(c.raw, 10);
  eif_config_set_trials(c.raw, 6);
  eif_rank_result* res = nullptr;
  ASSERT_EQ(eif_rank(c.raw, &res), EIF_OK);
  double exact = -1.0;
  double kendall = -2.0;
  size_t trials = 0;
  for (eif_method m : {EIF_METHOD_NAIVE, EIF_METHOD_ONE_STEP_CROSSFIT, EIF_METHOD_ONE_STEP_ORACLE}) {
    ASSERT_EQ(eif_rank_result_summary(res, m, &exact, &kendall, &trials), EIF_OK);
    EXPECT_GE(exact, 0.0);
    EXPECT_LE(exact, 1.0);
    EXPECT_GE(kendall, -1.0);
    EXPECT_EQ(trials, 6u);
  }
  EXPECT_EQ(eif_rank_result_summary(res, EIF_METHOD_ONE_STEP_FIXED, &exact, &kendall, &trials), EIF_ERR_INVALID_INPUT);
  eif_rank_result_destroy(res);

  eif_config_set_oracle(c.raw, 0);
  ASSERT_EQ(eif_rank(c.raw, &res), EIF_OK);
  EXPECT_EQ(eif_rank_result_summary(res, EIF_METHOD_ONE_STEP_ORACLE, &exact, &kendall, &trials),
            EIF_ERR_INVALID_INPUT);
  eif_rank_result_destroy(res);
}

TEST(CApi, SweepCsv) {
  Config c;
  eif_config_set_n(c.raw, 60);
  eif_config_set_mc_samples(c.raw, 5);
  eif_config_set_trials(c.raw, 3);
  eif_config_set_axis(c.raw, EIF_AXIS_SIGMA_ETA);
  const double grid[] = {0.5, 1.0};
  eif_config_set_grid(c.raw, grid, 2);
  const auto path = temp_path("sweep.csv");
  ASSERT_EQ(eif_sweep_write_csv(c.raw, path.c_str()), EIF_OK);
  const auto csv = slurp(path);
  EXPECT_EQ(csv.rfind("axis,axis_value,method,exact_match,kendall_mean,trials\n", 0), 0u);
  EXPECT_NE(csv.find("sigma_eta,1,one_step_oracle,"), std::string::npos);
  ASSERT_EQ(eif_sweep_write_csv(c.raw, path.c_str()), EIF_OK);
  EXPECT_EQ(slurp(path), csv);
  std::remove(path.c_str());
}

TEST(CApi, BenchEstimateAndReport) {
  eif_bench* bench = nullptr;
  ASSERT_EQ(eif_bench_load(data_path("single.jsonl").c_str(), &bench), EIF_OK);
  EXPECT_EQ(eif_bench_size(bench), 1u);
  EXPECT_EQ(eif_bench_mc_samples(bench), 2u);
  eif_report naive{};
  eif_report one{};
  size_t clamped = 99;
  ASSERT_EQ(eif_bench_estimate(bench, 0.95, &naive, &one, &clamped), EIF_OK);
  EXPECT_EQ(one.theta_hat, 0.7);
  EXPECT_EQ(naive.theta_hat, 1.0);
  EXPECT_EQ(clamped, 0u);

  char line[256];
  ASSERT_EQ(eif_format_report(&one, line, sizeof(line)), EIF_OK);
  EXPECT_EQ(std::string(line).rfind("method=one_step_fixed theta_hat=0.7000", 0), 0u);
  char tiny[8];
  EXPECT_EQ(eif_format_report(&one, tiny, sizeof(tiny)), EIF_ERR_INVALID_INPUT);
  EXPECT_EQ(std::strlen(tiny), 7u);

  const auto path = temp_path("report.csv");
  ASSERT_EQ(eif_write_report_csv(path.c_str(), "m", 0.65, &naive, &one), EIF_OK);
  EXPECT_NE(slurp(path).find("\nm,65.00,100.00,70.00,70.00,30.00,1,2,"), std::string::npos) << slurp(path);
  std::remove(path.c_str());
  eif_bench_destroy(bench);
}

TEST(CApi, BenchLoadFailures) {
  eif_bench* bench = nullptr;
  EXPECT_EQ(eif_bench_load(data_path("mixed_m.jsonl").c_str(), &bench), EIF_ERR_CONTRACT);
  EXPECT_EQ(bench, nullptr);
  EXPECT_NE(std::string(eif_last_error()).find("line 2"), std::string::npos);
  EXPECT_EQ(eif_bench_load(data_path("malformed.jsonl").c_str(), &bench), EIF_ERR_PARSE);
  EXPECT_EQ(eif_bench_load("/no/such.jsonl", &bench), EIF_ERR_IO);
  EXPECT_EQ(eif_bench_size(nullptr), 0u);
  eif_bench_destroy(nullptr);
}

TEST(CApi, Improvement) { EXPECT_NEAR(eif_improvement(78.00, 80.60, 82.83), 2.60, 1e-9); }

}  // namespace
