#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "eifeval/error.hpp"
#include "eifeval/io.hpp"
#include "support.hpp"

namespace {

using eifeval::ErrorCode;
using namespace eifeval::io;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("eifeval_test_" + std::to_string(::getpid()) + "_" + name)).string();
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const eifeval::Error& e) {
    return e.what();
  }
  return {};
}

TEST(LoadBenchDataset, SampleFileHasOneRecordWithTwoMcSamples) {
  const auto data = load_bench_dataset(eifeval::test::data_path("sample.jsonl"));
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0].id, "gsm8k-0001");
  EXPECT_EQ(data[0].mc_samples(), 2u);
  EXPECT_EQ(data[0].tau_pred, (std::vector<double>{0.8, 0.6, 0.4}));
  EXPECT_EQ(data[0].aux[1].v, 0);
}

TEST(LoadBenchDataset, MissingFieldIsNamed) {
  const auto path = eifeval::test::data_path("missing_tau.jsonl");
  EXPECT_THROW_CODE(load_bench_dataset(path), ErrorCode::contract);
  const auto msg = error_message([&] { load_bench_dataset(path); });
  EXPECT_NE(msg.find("tau_pred"), std::string::npos) << msg;
}

TEST(LoadBenchDataset, InconsistentMNamesBothLines) {
  const auto path = eifeval::test::data_path("mixed_m.jsonl");
  EXPECT_THROW_CODE(load_bench_dataset(path), ErrorCode::contract);
  const auto msg = error_message([&] { load_bench_dataset(path); });
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(LoadBenchDataset, MalformedLineReportsLineNumber) {
  const auto path = eifeval::test::data_path("malformed.jsonl");
  EXPECT_THROW_CODE(load_bench_dataset(path), ErrorCode::parse);
  const auto msg = error_message([&] { load_bench_dataset(path); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(LoadBenchDataset, MissingFileAndEmptyFile) {
  EXPECT_THROW_CODE(load_bench_dataset(temp_path("does_not_exist.jsonl")), ErrorCode::io);
  const auto path = temp_path("blank.jsonl");
  std::ofstream(path) << "\n   \n";
  EXPECT_THROW_CODE(load_bench_dataset(path), ErrorCode::empty_dataset);
  std::remove(path.c_str());
}

TEST(ParseBenchLine, ContractViolations) {
  const std::string ok =
      R"({"id":"a","question":"q","answer":"1","ground_truth":"1","phi":1,"aux":[{"w1":"x","w2":"y","v":1},{"w1":"x","w2":"y","v":0}],"tau_pred":[0.5,0.5]})";
  EXPECT_NO_THROW(parse_bench_line(ok));

  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string s = ok;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_THROW_CODE(parse_bench_line(replaced("[0.5,0.5]", "[0.5]")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line(replaced("\"phi\":1", "\"phi\":true")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line(replaced("\"phi\":1", "\"phi\":2")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line(replaced("\"v\":0", "\"v\":0.5")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line(replaced("\"id\":\"a\"", "\"id\":7")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line(replaced("\"id\":\"a\",", "\"extra\":1,\"id\":\"a\",")), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_bench_line("[1,2]"), ErrorCode::parse);
  EXPECT_THROW_CODE(parse_bench_line("{\"id\":"), ErrorCode::parse);
}

TEST(ParseBenchLine, RoundTripsFixtureLines) {
  for (const char* name : {"sample.jsonl", "single.jsonl", "table15.jsonl"}) {
    std::ifstream in(eifeval::test::data_path(name));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      const auto rec = parse_bench_line(line, ++n);
      EXPECT_EQ(parse_bench_line(serialize_bench_record(rec)), rec) << name << ":" << n;
    }
    EXPECT_GT(n, 0u);
  }
}

TEST(FormatPercent, TwoDecimalsHalfEven) {
  EXPECT_EQ(format_percent(0.5909), "59.09");
  EXPECT_EQ(format_percent(14.0 / 15.0), "93.33");
  EXPECT_EQ(format_percent(0.00125), "0.12");
  EXPECT_EQ(format_percent(0.00135), "0.14");
  EXPECT_EQ(format_percent(0.9993), "99.93");
  EXPECT_EQ(format_percent(-0.0082), "-0.82");
  EXPECT_EQ(format_percent(-0.000001), "0.00");
  EXPECT_EQ(format_percent(1.0), "100.00");
}

eifeval::estimate::EstimateReport report(eifeval::estimate::Method method, double theta) {
  eifeval::estimate::EstimateReport r;
  r.method = method;
  r.theta_hat = theta;
  r.theta_hat_clamped = std::min(1.0, std::max(0.0, theta));
  r.std_error = 0.0123;
  r.ci_lower = theta - 0.024;
  r.ci_upper = theta + 0.024;
  r.n = 100;
  r.m = 4;
  return r;
}

TEST(WriteReport, RowWithImprovement) {
  using eifeval::estimate::Method;
  const ReportRow row{"DeepSeek-R1-Distill-Llama-70B", 0.5909, report(Method::naive, 0.60),
                      report(Method::one_step_fixed, 0.59)};
  const std::string csv = render_report({row});
  EXPECT_EQ(csv, std::string(kReportHeader) + "\nDeepSeek-R1-Distill-Llama-70B,59.09,60.00,59.00,59.00,0.82,100,4,1.23,56.60,61.40\n");
}

TEST(WriteReport, EmptyIsHeaderOnlyAndBytesAreStable) {
  EXPECT_EQ(render_report({}), std::string(kReportHeader) + "\n");
  using eifeval::estimate::Method;
  const std::vector<ReportRow> rows{{"a,b", std::nullopt, report(Method::naive, 0.78), report(Method::one_step_fixed, 1.02)}};
  const auto p1 = temp_path("r1.csv");
  const auto p2 = temp_path("r2.csv");
  write_report(rows, p1);
  write_report(rows, p2);
  EXPECT_EQ(read_file(p1), read_file(p2));
  EXPECT_EQ(read_file(p1), render_report(rows));
  EXPECT_NE(read_file(p1).find("\"a,b\",,78.00,102.00,100.00,,"), std::string::npos);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST(WriteReport, UnwritablePathIsIoError) {
  EXPECT_THROW_CODE(write_report({}, "/nonexistent-dir/x.csv"), ErrorCode::io);
}

TEST(RenderSweep, ColumnsAndRows) {
  eifeval::ranking::SweepPoint p;
  p.axis_value = 0.2;
  p.outcome.naive.method = eifeval::estimate::Method::naive;
  p.outcome.naive.exact_match = 0.56;
  p.outcome.naive.kendall_mean = 0.7;
  p.outcome.naive.trials = 100;
  p.outcome.one_step = p.outcome.naive;
  p.outcome.one_step.method = eifeval::estimate::Method::one_step_crossfit;
  p.outcome.one_step.exact_match = 0.99;
  const std::string csv = render_sweep(eifeval::ranking::SweepAxis::sigma_eta, {p});
  EXPECT_EQ(csv, std::string(kSweepHeader) +
                     "\nsigma_eta,0.2,naive,0.5600,0.7000,100\nsigma_eta,0.2,one_step_crossfit,0.9900,0.7000,100\n");
}

TEST(FormatReportLine, FixedLayout) {
  auto r = report(eifeval::estimate::Method::one_step_fixed, 0.7);
  EXPECT_EQ(format_report_line(r),
            "method=one_step_fixed theta_hat=0.7000 theta_hat_clamped=0.7000 std_error=0.0123 ci=[0.6760,0.7240] "
            "level=0.95 n=100 m=4 k=0");
}

TEST(RunConfig, DefaultsMirrorReferenceSettings) {
  const auto c = parse_run_config("{}");
  EXPECT_EQ(c.sim.n, 1000u);
  EXPECT_EQ(c.sim.m, 500u);
  EXPECT_EQ(c.folds, 5u);
  EXPECT_EQ(c.sim.trials, 100u);
  EXPECT_EQ(c.sim.rho1, 0.8);
  EXPECT_EQ(c.sim.rho2, 0.6);
  EXPECT_EQ(c.sim.sigma_eta, 0.6);
  EXPECT_EQ(c.level, 0.95);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, OverridesAndRejections) {
  const auto c = parse_run_config(R"({"mode":"sweep","axis":"sigma_eta","grid":[0.2,0.4],"n":50,"seed":9,"level":0.9})");
  EXPECT_EQ(c.mode, Mode::sweep);
  EXPECT_EQ(c.axis, eifeval::ranking::SweepAxis::sigma_eta);
  EXPECT_EQ(c.grid, (std::vector<double>{0.2, 0.4}));
  EXPECT_EQ(c.sim.n, 50u);
  EXPECT_EQ(c.sim.seed, 9u);

  EXPECT_THROW_CODE(parse_run_config(R"({"trails":5})"), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_run_config(R"({"n":"many"})"), ErrorCode::contract);
  EXPECT_THROW_CODE(parse_run_config("{"), ErrorCode::parse);
  EXPECT_THROW_CODE(parse_run_config(R"({"level":1.5})").validate(), ErrorCode::invalid_input);
  EXPECT_THROW_CODE(parse_run_config(R"({"mode":"estimate","input":"/no/such/file.jsonl"})").validate(), ErrorCode::io);
  EXPECT_THROW_CODE(load_run_config(temp_path("missing.json")), ErrorCode::io);
}

}  // namespace
