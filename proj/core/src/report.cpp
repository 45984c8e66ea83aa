#include "qekr/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace qekr {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::hypothesis_not_met: return "hypothesis-not-met";
    case Status::range_extrapolation: return "range-extrapolation";
    case Status::error: return "error";
  }
  return "unknown";
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::failure: return "failure";
    case Severity::critical: return "critical";
  }
  return "unknown";
}

void Report::fail(const std::string& note_text, json witness_value, Severity sev) {
  if (status != Status::error) status = Status::fail;
  if (static_cast<int>(sev) > static_cast<int>(severity)) severity = sev;
  notes.push_back(note_text);
  if (!witness && !witness_value.is_null()) witness = std::move(witness_value);
}

void Report::fail_residual(const std::string& note_text, json witness_value) {
  residual_zero = false;
  fail(note_text, std::move(witness_value));
}

json to_json(const Report& r, bool include_timing) {
  json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["status"] = to_string(r.status);
  j["pass"] = r.ok();
  j["residual_zero"] = r.residual_zero;
  if (r.witness) j["witness"] = *r.witness;
  j["values"] = r.values;
  j["notes"] = r.notes;
  j["severity"] = to_string(r.severity);
  if (include_timing && r.elapsed_ms)
    j["elapsed_ms"] = *r.elapsed_ms;
  else
    j["elapsed_ms"] = nullptr;
  return j;
}

namespace {
Status status_from(const std::string& s) {
  for (auto st : {Status::pass, Status::fail, Status::hypothesis_not_met,
                  Status::range_extrapolation, Status::error})
    if (s == to_string(st)) return st;
  throw std::invalid_argument("unknown report status: " + s);
}
Severity severity_from(const std::string& s) {
  for (auto sv : {Severity::info, Severity::failure, Severity::critical})
    if (s == to_string(sv)) return sv;
  throw std::invalid_argument("unknown report severity: " + s);
}
}  // namespace

Report report_from_json(const json& j) {
  Report r(j.at("check").get<std::string>(), j.at("params"));
  r.status = status_from(j.at("status").get<std::string>());
  r.residual_zero = j.at("residual_zero").get<bool>();
  if (j.contains("witness")) r.witness = j.at("witness");
  r.values = j.value("values", json::object());
  r.notes = j.value("notes", std::vector<std::string>{});
  r.severity = severity_from(j.value("severity", std::string("info")));
  if (j.contains("elapsed_ms") && !j.at("elapsed_ms").is_null())
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
  return r;
}

ReportTimer::~ReportTimer() {
  auto end = std::chrono::steady_clock::now();
  report_.elapsed_ms = std::chrono::duration<double, std::milli>(end - start_).count();
}

bool all_ok(const std::vector<Report>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.ok(); });
}

void merge_part(Report& into, const std::string& name, const Report& part) {
  json summary = part.values;
  summary["status"] = to_string(part.status);
  summary["residual_zero"] = part.residual_zero;
  into.values[name] = summary;
  for (const auto& n : part.notes) into.notes.push_back(name + ": " + n);
  if (!part.residual_zero) into.residual_zero = false;
  if (part.status == Status::error) {
    into.status = Status::error;
    if (!into.witness && part.witness) into.witness = json{{"part", name}, {"witness", *part.witness}};
  } else if (part.status == Status::fail) {
    into.fail(name + " failed", part.witness ? json{{"part", name}, {"witness", *part.witness}}
                                             : json{{"part", name}},
              part.severity);
  }
  if (static_cast<int>(part.severity) > static_cast<int>(into.severity)) into.severity = part.severity;
}

}  // namespace qekr
