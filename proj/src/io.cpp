#include "eifeval/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "eifeval/error.hpp"

namespace eifeval::io {

using nlohmann::json;

namespace {

std::string at_line(std::size_t line_number) {
  return line_number == 0 ? std::string() : "line " + std::to_string(line_number) + ": ";
}

const json& require(const json& obj, const char* key, std::size_t line_number) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::contract, at_line(line_number) + "missing required field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line_number) {
  const json& v = require(obj, key, line_number);
  if (!v.is_string()) fail(ErrorCode::contract, at_line(line_number) + "field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

int require_flag(const json& v, const std::string& key, std::size_t line_number) {
  if (!v.is_number_integer() || (v.get<long long>() != 0 && v.get<long long>() != 1)) {
    fail(ErrorCode::contract, at_line(line_number) + "field \"" + key + "\" must be 0 or 1");
  }
  return static_cast<int>(v.get<long long>());
}

const std::set<std::string>& bench_keys() {
  static const std::set<std::string> keys{"id", "question", "answer", "ground_truth", "phi", "aux", "tau_pred"};
  return keys;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::io, "failed writing '" + path + "'");
}

}  // namespace

BenchRecord parse_bench_line(std::string_view line, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, at_line(line_number) + "malformed JSON: " + e.what());
  }
  if (!obj.is_object()) fail(ErrorCode::parse, at_line(line_number) + "expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!bench_keys().contains(key)) fail(ErrorCode::contract, at_line(line_number) + "unknown field \"" + key + "\"");
  }

  BenchRecord r;
  r.id = require_string(obj, "id", line_number);
  r.question = require_string(obj, "question", line_number);
  r.answer = require_string(obj, "answer", line_number);
  r.ground_truth = require_string(obj, "ground_truth", line_number);
  r.phi = require_flag(require(obj, "phi", line_number), "phi", line_number);

  const json& aux = require(obj, "aux", line_number);
  if (!aux.is_array()) fail(ErrorCode::contract, at_line(line_number) + "field \"aux\" must be an array");
  for (const json& t : aux) {
    if (!t.is_object()) fail(ErrorCode::contract, at_line(line_number) + "aux entries must be objects");
    for (const auto& [key, _] : t.items()) {
      if (key != "w1" && key != "w2" && key != "v") {
        fail(ErrorCode::contract, at_line(line_number) + "unknown aux field \"" + key + "\"");
      }
    }
    TextTriple triple;
    triple.w1 = require_string(t, "w1", line_number);
    triple.w2 = require_string(t, "w2", line_number);
    triple.v = static_cast<std::uint8_t>(require_flag(require(t, "v", line_number), "v", line_number));
    r.aux.push_back(std::move(triple));
  }

  const json& tau = require(obj, "tau_pred", line_number);
  if (!tau.is_array()) fail(ErrorCode::contract, at_line(line_number) + "field \"tau_pred\" must be an array");
  for (const json& t : tau) {
    if (!t.is_number()) fail(ErrorCode::contract, at_line(line_number) + "tau_pred entries must be numbers");
    r.tau_pred.push_back(t.get<double>());
  }

  try {
    validate(r);
  } catch (const Error& e) {
    fail(e.code(), at_line(line_number) + e.what());
  }
  return r;
}

std::string serialize_bench_record(const BenchRecord& record) {
  json aux = json::array();
  for (const auto& t : record.aux) aux.push_back(json{{"w1", t.w1}, {"w2", t.w2}, {"v", static_cast<int>(t.v)}});
  json obj = json::object();
  obj["id"] = record.id;
  obj["question"] = record.question;
  obj["answer"] = record.answer;
  obj["ground_truth"] = record.ground_truth;
  obj["phi"] = record.phi;
  obj["aux"] = std::move(aux);
  obj["tau_pred"] = record.tau_pred;
  return obj.dump();
}

std::vector<BenchRecord> load_bench_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");

  std::vector<BenchRecord> records;
  std::size_t first_line = 0;
  std::string line;
  for (std::size_t line_number = 1; std::getline(in, line); ++line_number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    BenchRecord r = parse_bench_line(line, line_number);
    if (records.empty()) {
      first_line = line_number;
    } else if (r.mc_samples() != records.front().mc_samples()) {
      fail(ErrorCode::contract, "inconsistent M: line " + std::to_string(first_line) + " has M=" +
                                    std::to_string(records.front().mc_samples()) + " but line " +
                                    std::to_string(line_number) + " has M=" + std::to_string(r.mc_samples()));
    }
    records.push_back(std::move(r));
  }
  if (in.bad()) fail(ErrorCode::io, "error reading '" + path + "'");
  if (records.empty()) fail(ErrorCode::empty_dataset, "'" + path + "' contains no records");
  return records;
}

std::string format_percent(double fraction) {
  const double hundredths = fraction * 10000.0;
  const double lower = std::floor(hundredths);
  const double frac = hundredths - lower;
  double units = 0.0;
  if (std::abs(frac - 0.5) < 1e-7) {
    units = std::fmod(lower, 2.0) == 0.0 ? lower : lower + 1.0;
  } else {
    units = std::round(hundredths);
  }
  if (units == 0.0) units = 0.0;  // no "-0.00"
  return fixed(units / 100.0, 2);
}

std::string render_report(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& row : rows) {
    const auto& os = row.one_step;
    out << csv_field(row.model) << ',';
    if (row.gt) out << format_percent(*row.gt);
    out << ',' << format_percent(row.naive.theta_hat) << ',' << format_percent(os.theta_hat) << ','
        << format_percent(os.theta_hat_clamped) << ',';
    if (row.gt) {
      out << format_percent(estimate::improvement_metric(row.naive.theta_hat * 100.0, os.theta_hat * 100.0, *row.gt * 100.0) /
                            100.0);
    }
    out << ',' << os.n << ',' << os.m << ',' << format_percent(os.std_error) << ',' << format_percent(os.ci_lower) << ','
        << format_percent(os.ci_upper) << '\n';
  }
  return out.str();
}

void write_report(const std::vector<ReportRow>& rows, const std::string& path) { write_file(path, render_report(rows)); }

std::string render_sweep(ranking::SweepAxis axis, const std::vector<ranking::SweepPoint>& points) {
  std::ostringstream out;
  out << kSweepHeader << '\n';
  auto emit = [&](double value, const ranking::RankingSummary& s) {
    out << ranking::to_string(axis) << ',' << shortest(value) << ',' << estimate::to_string(s.method) << ','
        << fixed(s.exact_match, 4) << ',' << fixed(s.kendall_mean, 4) << ',' << s.trials << '\n';
  };
  for (const auto& p : points) {
    emit(p.axis_value, p.outcome.naive);
    emit(p.axis_value, p.outcome.one_step);
    if (p.outcome.oracle) emit(p.axis_value, *p.outcome.oracle);
  }
  return out.str();
}

void write_sweep(ranking::SweepAxis axis, const std::vector<ranking::SweepPoint>& points, const std::string& path) {
  write_file(path, render_sweep(axis, points));
}

std::string format_report_line(const estimate::EstimateReport& r) {
  std::ostringstream out;
  out << "method=" << estimate::to_string(r.method) << " theta_hat=" << fixed(r.theta_hat, 4)
      << " theta_hat_clamped=" << fixed(r.theta_hat_clamped, 4) << " std_error=" << fixed(r.std_error, 4)
      << " ci=[" << fixed(r.ci_lower, 4) << "," << fixed(r.ci_upper, 4) << "]"
      << " level=" << shortest(r.level) << " n=" << r.n << " m=" << r.m << " k=" << r.k;
  return out.str();
}

Mode mode_from_string(std::string_view name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "sweep") return Mode::sweep;
  if (name == "rank") return Mode::rank;
  if (name == "estimate") return Mode::estimate;
  fail(ErrorCode::invalid_input, "unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate:
      return "simulate";
    case Mode::sweep:
      return "sweep";
    case Mode::rank:
      return "rank";
    case Mode::estimate:
      return "estimate";
  }
  return "simulate";
}

void RunConfig::validate() const {
  sim.validate();
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::invalid_input, "config: level must lie in (0,1)");
  if (folds < 2) fail(ErrorCode::invalid_folds, "config: folds must be >= 2");
  if (model_index >= sim.models()) fail(ErrorCode::invalid_input, "config: model_index out of range");
  if (mode == Mode::estimate) {
    if (input.empty()) fail(ErrorCode::invalid_input, "config: estimate mode needs an input path");
    if (!std::ifstream(input)) fail(ErrorCode::io, "config: input '" + input + "' does not exist");
  }
}

RunConfig parse_run_config(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, std::string("config: malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) fail(ErrorCode::parse, "config: expected a JSON object");

  RunConfig c;
  try {
    for (const auto& [key, v] : obj.items()) {
      if (key == "mode") c.mode = mode_from_string(v.get<std::string>());
      else if (key == "n") c.sim.n = v.get<std::size_t>();
      else if (key == "m") c.sim.m = v.get<std::size_t>();
      else if (key == "sigma_sq_per_model") c.sim.sigma_sq_per_model = v.get<std::vector<double>>();
      else if (key == "rho1") c.sim.rho1 = v.get<double>();
      else if (key == "rho2") c.sim.rho2 = v.get<double>();
      else if (key == "sigma_eta") c.sim.sigma_eta = v.get<double>();
      else if (key == "seed") c.sim.seed = v.get<std::uint64_t>();
      else if (key == "trials") c.sim.trials = v.get<std::size_t>();
      else if (key == "folds") c.folds = v.get<std::size_t>();
      else if (key == "level") c.level = v.get<double>();
      else if (key == "model_index") c.model_index = v.get<std::size_t>();
      else if (key == "axis") c.axis = ranking::axis_from_string(v.get<std::string>());
      else if (key == "grid") c.grid = v.get<std::vector<double>>();
      else if (key == "gap") c.gap = v.get<double>();
      else if (key == "with_oracle") c.with_oracle = v.get<bool>();
      else if (key == "input") c.input = v.get<std::string>();
      else if (key == "output") c.output = v.get<std::string>();
      else fail(ErrorCode::contract, "config: unknown key \"" + key + "\"");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::contract, std::string("config: wrong value type: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

}  // namespace eifeval::io
