#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace qekr {

using json = nlohmann::json;

enum class Status {
  pass,
  fail,
  hypothesis_not_met,   // statement is conditional and the condition is false
  range_extrapolation,  // evaluated outside the parameter range of the statement
  error,                // could not be evaluated (bad parameters, budget)
};

enum class Severity { info, failure, critical };

const char* to_string(Status s);
const char* to_string(Severity s);

/// Outcome of a single verification. Serialized as
/// {check, params, status, pass, residual_zero, witness?, values, notes, severity, elapsed_ms}.
/// `values` holds exact quantities as decimal strings (rationals as "p/q").
struct Report {
  std::string check;
  json params = json::object();
  Status status = Status::pass;
  bool residual_zero = true;
  std::optional<json> witness;
  json values = json::object();
  std::vector<std::string> notes;
  Severity severity = Severity::info;
  std::optional<double> elapsed_ms;

  Report() = default;
  Report(std::string check_name, json parameters)
      : check(std::move(check_name)), params(std::move(parameters)) {}

  /// Failing states are `fail` and `error`; conditional and out-of-range
  /// outcomes are recorded but do not count as failures.
  bool ok() const { return status != Status::fail && status != Status::error; }

  /// Marks the report failed. The first witness recorded is kept.
  void fail(const std::string& note, json witness_value = nullptr,
            Severity sev = Severity::failure);
  void fail_residual(const std::string& note, json witness_value = nullptr);
  void note(std::string text) { notes.push_back(std::move(text)); }
};

json to_json(const Report& r, bool include_timing);
Report report_from_json(const json& j);

/// Records wall time into a report on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(Report& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer();
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  Report& report_;
  std::chrono::steady_clock::time_point start_;
};

bool all_ok(const std::vector<Report>& reports);

/// Folds a sub-check into `into`: its outcome lands in into.values[name] and a
/// failure propagates with the sub-check's first witness.
void merge_part(Report& into, const std::string& name, const Report& part);

}  // namespace qekr
