#pragma once

// Verification records and their JSON / CSV forms.

#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fqmenon/errors.hpp"
#include "fqmenon/scalar.hpp"

namespace fqmenon {

enum class RecordStatus { kOk, kBudgetExceeded, kPreconditionError };

inline std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::kBudgetExceeded:
      return "budget_exceeded";
    case RecordStatus::kPreconditionError:
      return "precondition_error";
    default:
      return "ok";
  }
}

inline RecordStatus parse_record_status(const std::string& s) {
  if (s == "ok") return RecordStatus::kOk;
  if (s == "budget_exceeded") return RecordStatus::kBudgetExceeded;
  if (s == "precondition_error") return RecordStatus::kPreconditionError;
  throw ParseError("unknown record status '" + s + "'");
}

// One comparison of a brute-force value against a closed form.
struct Record {
  std::string suite;
  std::uint64_t id = 0;
  std::string instance;
  Complex lhs;
  Complex rhs;
  double abs_diff = 0;
  bool pass = false;
  std::uint64_t terms = 0;
  std::int64_t elapsed_ms = 0;
  std::string mode = "exact";
  // Exact renderings, present in exact mode.
  std::string lhs_exact;
  std::string rhs_exact;
  RecordStatus status = RecordStatus::kOk;
  std::string error;

  bool failed() const { return status == RecordStatus::kOk && !pass; }
};

using RecordSink = std::function<void(Record)>;

inline nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["id"] = r.id;
  j["instance"] = r.instance;
  j["lhs"] = {r.lhs.real(), r.lhs.imag()};
  j["rhs"] = {r.rhs.real(), r.rhs.imag()};
  j["abs_diff"] = r.abs_diff;
  j["pass"] = r.pass;
  j["terms"] = r.terms;
  j["elapsed_ms"] = r.elapsed_ms;
  j["mode"] = r.mode;
  if (r.mode == "exact") {
    j["lhs_exact"] = r.lhs_exact;
    j["rhs_exact"] = r.rhs_exact;
  }
  j["status"] = to_string(r.status);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline Record record_from_json(const nlohmann::ordered_json& j) {
  Record r;
  try {
    r.suite = j.at("suite").get<std::string>();
    r.id = j.at("id").get<std::uint64_t>();
    r.instance = j.at("instance").get<std::string>();
    r.lhs = {j.at("lhs").at(0).get<double>(), j.at("lhs").at(1).get<double>()};
    r.rhs = {j.at("rhs").at(0).get<double>(), j.at("rhs").at(1).get<double>()};
    r.abs_diff = j.at("abs_diff").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.terms = j.at("terms").get<std::uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    r.mode = j.at("mode").get<std::string>();
    if (j.contains("lhs_exact")) r.lhs_exact = j.at("lhs_exact").get<std::string>();
    if (j.contains("rhs_exact")) r.rhs_exact = j.at("rhs_exact").get<std::string>();
    r.status = parse_record_status(j.at("status").get<std::string>());
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
  return r;
}

struct Summary {
  std::uint64_t total = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t budget_exceeded = 0;
  std::uint64_t precondition_errors = 0;

  void add(const Record& r) {
    ++total;
    if (r.status == RecordStatus::kBudgetExceeded) {
      ++budget_exceeded;
    } else if (r.status == RecordStatus::kPreconditionError) {
      ++precondition_errors;
    } else if (r.pass) {
      ++passed;
    } else {
      ++failed;
    }
  }

  // 0 pass, 1 identity failure, 4 budget exceeded, 3 precondition error.
  int exit_code() const {
    if (failed) return 1;
    if (budget_exceeded) return 4;
    if (precondition_errors) return 3;
    return 0;
  }

  nlohmann::ordered_json to_json() const {
    return {{"total", total},
            {"passed", passed},
            {"failed", failed},
            {"budget_exceeded", budget_exceeded},
            {"precondition_errors", precondition_errors}};
  }

  std::string line(const std::string& suite) const {
    std::ostringstream out;
    out << suite << ": " << passed << "/" << total << " passed";
    if (failed) out << ", " << failed << " failed";
    if (budget_exceeded) out << ", " << budget_exceeded << " over budget";
    if (precondition_errors) out << ", " << precondition_errors << " precondition errors";
    return out.str();
  }
};

inline constexpr const char* kCsvHeader = "suite,instance-id,lhs-re,lhs-im,rhs-re,rhs-im,diff,pass,terms,ms";

inline std::string format_double(double v) {
  // Shortest text that parses back to the same double.
  return nlohmann::json(v).dump();
}

inline std::string to_csv_row(const Record& r) {
  std::ostringstream out;
  out << r.suite << ',' << r.id << ',' << format_double(r.lhs.real()) << ','
      << format_double(r.lhs.imag()) << ',' << format_double(r.rhs.real()) << ','
      << format_double(r.rhs.imag()) << ',' << format_double(r.abs_diff) << ','
      << (r.pass ? "true" : "false") << ',' << r.terms << ',' << r.elapsed_ms;
  return out.str();
}

// Streams records as they arrive and closes the document with a summary.
class ReportWriter {
 public:
  enum class Format { kJson, kCsv };

  ReportWriter(std::ostream& out, Format format, nlohmann::ordered_json config)
      : out_(out), format_(format) {
    if (format_ == Format::kJson) {
      out_ << "{\n\"config\": " << config.dump() << ",\n\"records\": [";
    } else {
      out_ << kCsvHeader << '\n';
    }
  }

  void write(const Record& r) {
    summary_.add(r);
    if (format_ == Format::kJson) {
      out_ << (first_ ? "\n" : ",\n") << to_json(r).dump();
      first_ = false;
    } else {
      out_ << to_csv_row(r) << '\n';
    }
  }

  const Summary& finish() {
    if (format_ == Format::kJson) {
      out_ << (first_ ? "" : "\n") << "],\n\"summary\": " << summary_.to_json().dump() << "\n}\n";
    }
    out_.flush();
    return summary_;
  }

  const Summary& summary() const { return summary_; }

 private:
  std::ostream& out_;
  Format format_;
  Summary summary_;
  bool first_ = true;
};

}  // namespace fqmenon
