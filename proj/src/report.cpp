#include "metfix/report.hpp"

#include <cstdio>

#include "metfix/io.hpp"

namespace metfix {

ordered_json violations_json(const std::vector<TriangleViolation>& v,
                             std::size_t limit) {
  ordered_json out;
  out["count"] = v.size();
  ordered_json worst = ordered_json::array();
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) {
    worst.push_back({{"i", v[i].i},
                     {"j", v[i].j},
                     {"k", v[i].k},
                     {"slack", v[i].slack}});
  }
  out["worst"] = std::move(worst);
  return out;
}

ordered_json axiom_report_json(const AxiomReport& r) {
  ordered_json out;
  out["symmetric"] = r.symmetric;
  out["increasing"] = r.increasing;
  out["g0_le_y"] = r.zero_bound;
  ordered_json cond1;
  cond1["pass"] = r.shrink;
  ordered_json ws = ordered_json::array();
  for (const ShrinkWitness& w : r.shrink_witnesses) {
    ws.push_back({{"y", w.y},
                  {"t", w.t},
                  {"delta", w.delta},
                  {"value", w.value},
                  {"pass", w.pass}});
  }
  cond1["witnesses"] = std::move(ws);
  out["condition1"] = std::move(cond1);
  return out;
}

ordered_json modulus_json(const ModulusTable& m) {
  ordered_json out;
  out["deltas"] = m.deltas;
  out["omega"] = m.omega;
  out["resolution_delta"] = m.resolution_delta;
  out["omega_at_resolution"] = m.omega_at_resolution;
  out["threshold"] = m.threshold;
  out["passes"] = m.passes;
  return out;
}

ordered_json equivalence_json(const EquivalenceModuli& e) {
  ordered_json out;
  out["forward"] = modulus_json(e.forward);
  out["backward"] = modulus_json(e.backward);
  out["passes"] = e.passes();
  return out;
}

ordered_json correction_function_json(const CorrectionFunction& f) {
  ordered_json out;
  const int depth = f.depth();
  out["depth"] = depth;
  ordered_json rs = ordered_json::array();
  const std::size_t N = f.seq.r.size() - 1;  // 2^depth
  for (std::size_t k = 1; k <= N; ++k) {
    rs.push_back({{"q", std::to_string(k) + "/" + std::to_string(N)},
                  {"r", f.seq.r[k]}});
  }
  out["r"] = std::move(rs);
  out["scale"] = f.scale;
  return out;
}

ordered_json subadditivity_json(const SubadditivityReport& r) {
  ordered_json out;
  out["checked"] = r.checked;
  out["violations"] = r.violations;
  out["worst_excess"] = r.worst_excess;
  out["slack"] = r.slack;
  out["pass"] = r.pass;
  return out;
}

ordered_json separation_json(const std::vector<SeparationBound>& bounds) {
  ordered_json out = ordered_json::array();
  for (const SeparationBound& b : bounds) {
    out.push_back({{"m", b.m},
                   {"pairs_below", b.pairs_below},
                   {"max_d", b.max_d},
                   {"bound", b.bound},
                   {"pass", b.pass}});
  }
  return out;
}

ordered_json td_grid_json(const EmpiricalTD& td) {
  ordered_json out;
  out["breakpoints"] = td.breakpoints;
  const std::size_t m = td.m();
  ordered_json rows = ordered_json::array();
  for (std::size_t p = 0; p < m; ++p) {
    ordered_json row = ordered_json::array();
    for (std::size_t q = 0; q < m; ++q) row.push_back(td.cell(p, q));
    rows.push_back(std::move(row));
  }
  out["table"] = std::move(rows);
  out["envelope_mode"] = td.envelope_mode;
  return out;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport::RunReport(std::string command, const std::string& input_bytes)
    : command_(std::move(command)), digest_(hex_digest(fnv1a64(input_bytes))) {}

void RunReport::set_parameter(const std::string& key, ordered_json value) {
  parameters_[key] = std::move(value);
}

void RunReport::set_result(const std::string& key, ordered_json value) {
  results_[key] = std::move(value);
}

void RunReport::add_warning(const std::string& w) { warnings_.push_back(w); }

void RunReport::add_warnings(const std::vector<std::string>& ws) {
  warnings_.insert(warnings_.end(), ws.begin(), ws.end());
}

std::string RunReport::finish(int exit_status) const {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command_;
  j["input_digest"] = digest_;
  j["parameters"] = parameters_;
  j["results"] = results_;
  j["warnings"] = warnings_;
  j["exit_status"] = exit_status;
  return j.dump(2) + "\n";
}

}  // namespace metfix
