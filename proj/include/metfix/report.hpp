#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "metfix/correction.hpp"
#include "metfix/deficiency.hpp"
#include "metfix/group.hpp"
#include "metfix/premetric.hpp"

namespace metfix {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// JSON fragments for the individual result payloads.
ordered_json violations_json(const std::vector<TriangleViolation>& v,
                             std::size_t limit = 16);
ordered_json axiom_report_json(const AxiomReport& r);
ordered_json modulus_json(const ModulusTable& m);
ordered_json equivalence_json(const EquivalenceModuli& e);
ordered_json correction_function_json(const CorrectionFunction& f);
ordered_json subadditivity_json(const SubadditivityReport& r);
ordered_json separation_json(const std::vector<SeparationBound>& bounds);
ordered_json td_grid_json(const EmpiricalTD& td);

std::string hex_digest(std::uint64_t h);

// Top-level run report every command prints to stdout.
class RunReport {
 public:
  RunReport(std::string command, const std::string& input_bytes);

  void set_parameter(const std::string& key, ordered_json value);
  void set_result(const std::string& key, ordered_json value);
  void add_warning(const std::string& w);
  void add_warnings(const std::vector<std::string>& ws);

  // Serializes the full document with the given exit status; ends in '\n'.
  std::string finish(int exit_status) const;

 private:
  std::string command_;
  std::string digest_;
  ordered_json parameters_ = ordered_json::object();
  ordered_json results_ = ordered_json::object();
  std::vector<std::string> warnings_;
};

}  // namespace metfix
