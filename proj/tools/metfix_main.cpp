#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metfix/correction.hpp"
#include "metfix/deficiency.hpp"
#include "metfix/group.hpp"
#include "metfix/io.hpp"
#include "metfix/premetric.hpp"
#include "metfix/report.hpp"

namespace {

using namespace metfix;

MatrixFormat to_format(const std::string& fmt, const std::string& path) {
  if (fmt == "csv") return MatrixFormat::csv;
  if (fmt == "json") return MatrixFormat::json;
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return ext == ".json" ? MatrixFormat::json : MatrixFormat::csv;
}

MatrixFile load_matrix(const std::string& bytes, MatrixFormat format) {
  std::istringstream in(bytes);
  return format == MatrixFormat::json ? parse_matrix_json(in)
                                      : parse_matrix_csv(in);
}

// A:B:STEP -> evenly spaced points from A to B; STEP fixes the count.
std::vector<double> parse_grid_spec(const std::string& spec) {
  std::istringstream is(spec);
  double a = 0.0, b = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  is >> a >> c1 >> b >> c2 >> step;
  if (!is || c1 != ':' || c2 != ':' || !(is >> std::ws).eof() ||
      !(step > 0.0) || b < a)
    throw validation_error(validation_error::kind::bad_format,
                           "--grid expects A:B:STEP with STEP > 0 and B >= A");
  const auto count = static_cast<std::size_t>(std::llround((b - a) / step));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    grid.push_back(count == 0
                       ? a
                       : a + (b - a) * static_cast<double>(i) /
                                 static_cast<double>(count));
  return grid;
}

// out.csv -> out<suffix>; keeps directories intact.
std::string swap_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.rfind('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw validation_error(validation_error::kind::bad_format,
                           "cannot write '" + path + "'");
  out << text;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOpts {
  std::string path;
  std::string format = "auto";
  double zero_tolerance = kZeroTolerance;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("path", opts.path, "input file")->required();
  cmd->add_option("--format", opts.format, "input format: csv or json")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  cmd->add_option("--zero-tolerance", opts.zero_tolerance,
                  "entries this close to zero are treated as zero");
}

int cmd_validate(const CommonOpts& opts) {
  const std::string bytes = slurp_file(opts.path);
  const MatrixFile mf = load_matrix(bytes, to_format(opts.format, opts.path));
  RunReport rep("validate", bytes);
  rep.set_parameter("zero_tolerance", opts.zero_tolerance);

  ValidateResult vr =
      validate_premetric(mf.rows, mf.labels, opts.zero_tolerance);
  const double tolerance = mf.tolerance.value_or(0.0);
  rep.set_parameter("tolerance", tolerance);
  rep.add_warnings(vr.warnings);

  const auto violations = triangle_violations(vr.premetric, tolerance);
  rep.set_result("points", vr.premetric.n);
  rep.set_result("diameter", vr.premetric.diameter());
  rep.set_result("is_metric", violations.empty());
  rep.set_result("triangle", violations_json(violations));

  const int status = violations.empty() ? 0 : 1;
  std::cout << rep.finish(status);
  return status;
}

int cmd_analyze(const CommonOpts& opts, const std::string& grid_spec,
                bool envelope, const std::string& out) {
  const std::string bytes = slurp_file(opts.path);
  const MatrixFile mf = load_matrix(bytes, to_format(opts.format, opts.path));
  RunReport rep("analyze", bytes);
  rep.set_parameter("zero_tolerance", opts.zero_tolerance);
  rep.set_parameter("envelope", envelope);
  if (!grid_spec.empty()) rep.set_parameter("grid", grid_spec);

  ValidateResult vr =
      validate_premetric(mf.rows, mf.labels, opts.zero_tolerance);
  rep.add_warnings(vr.warnings);
  PreMetric pm = vr.premetric;
  const double scale = normalize(pm);

  EmpiricalTD td = empirical_td(pm);
  if (envelope) td = monotone_envelope(td);
  const AxiomReport axioms = check_td_axioms(td, default_axiom_grid(1.0));
  const std::vector<double> deltas =
      grid_spec.empty() ? std::vector<double>{} : parse_grid_spec(grid_spec);
  const ModulusTable modulus =
      local_continuity_modulus(pm, kContinuityThreshold, deltas);
  const auto violations = triangle_violations(pm);

  rep.set_result("points", pm.n);
  rep.set_result("scale", scale);
  rep.set_result("is_metric", violations.empty());
  rep.set_result("triangle", violations_json(violations));
  rep.set_result("breakpoints", td.breakpoints);
  rep.set_result("axioms", axiom_report_json(axioms));
  rep.set_result("modulus", modulus_json(modulus));

  if (!out.empty()) {
    std::ostringstream plot;
    plot << "# delta,omega\n";
    for (std::size_t i = 0; i < modulus.deltas.size(); ++i)
      plot << fmt_double(modulus.deltas[i]) << ","
           << fmt_double(modulus.omega[i]) << "\n";
    write_text(out, plot.str());

    std::ostringstream dump;
    dump << "# triangle deficiency table; first row = breakpoints\n";
    const std::size_t m = td.m();
    for (std::size_t q = 0; q < m; ++q)
      dump << (q ? "," : "") << fmt_double(td.breakpoints[q]);
    dump << "\n";
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q)
        dump << (q ? "," : "") << fmt_double(td.cell(p, q));
      dump << "\n";
    }
    const std::string td_path = swap_suffix(out, ".td.csv");
    write_text(td_path, dump.str());
    rep.set_result("outputs", ordered_json{{"modulus", out},
                                           {"deficiency", td_path}});
  }

  const int status = violations.empty() ? 0 : 1;
  std::cout << rep.finish(status);
  return status;
}

int cmd_correct(const CommonOpts& opts, int depth, double s_tolerance,
                double continuity_threshold, const std::string& out) {
  const std::string bytes = slurp_file(opts.path);
  const MatrixFile mf = load_matrix(bytes, to_format(opts.format, opts.path));
  RunReport rep("correct", bytes);
  rep.set_parameter("zero_tolerance", opts.zero_tolerance);
  rep.set_parameter("depth", depth);
  rep.set_parameter("s_tolerance", s_tolerance);
  rep.set_parameter("continuity_threshold", continuity_threshold);

  ValidateResult vr =
      validate_premetric(mf.rows, mf.labels, opts.zero_tolerance);
  rep.add_warnings(vr.warnings);

  CorrectResult cr;
  try {
    cr = correct_premetric(vr.premetric, depth, s_tolerance,
                           continuity_threshold);
  } catch (const correction_infeasible_error& e) {
    // Witness payload: the diagnostics that doomed the construction.
    PreMetric pm = vr.premetric;
    normalize(pm);
    rep.set_result("error", e.what());
    rep.set_result("triangle", violations_json(triangle_violations(pm)));
    rep.set_result("modulus", modulus_json(local_continuity_modulus(
                                  pm, continuity_threshold)));
    std::cout << rep.finish(3);
    return 3;
  }

  rep.set_result("points", cr.corrected.n);
  rep.set_result("scale", cr.scale);
  rep.set_result("was_metric", cr.was_metric);
  rep.set_result("triangle_before", violations_json(cr.violations_before));
  rep.set_result("modulus", modulus_json(cr.continuity));
  rep.set_result("correction", correction_function_json(cr.f));
  rep.set_result("subadditivity", subadditivity_json(cr.subadditivity));
  rep.set_result("triangle_after", violations_json(cr.violations_after));
  rep.set_result("slack_bound", cr.slack_bound());
  rep.set_result("equivalence", equivalence_json(cr.equivalence));

  if (!out.empty()) {
    write_matrix_csv(cr.corrected, out, cr.slack_bound());
    const std::string fn_path = swap_suffix(out, ".correction.json");
    write_text(fn_path, correction_function_json(cr.f).dump(2) + "\n");
    rep.set_result("outputs", ordered_json{{"matrix", out},
                                           {"correction", fn_path}});
  }

  std::cout << rep.finish(0);
  return 0;
}

int cmd_group(const std::string& path, int depth, double s_tolerance,
              const std::string& out) {
  const std::string bytes = slurp_file(path);
  std::istringstream in(bytes);
  const GroupFile gf = parse_group_json(in);
  RunReport rep("group", bytes);
  rep.set_parameter("depth", depth);
  rep.set_parameter("s_tolerance", s_tolerance);

  GroupBuildResult gr;
  try {
    gr = build_invariant_metric(gf.group, gf.metric, depth, s_tolerance);
  } catch (const correction_infeasible_error& e) {
    rep.set_result("error", e.what());
    rep.set_result("order", gf.group.order);
    std::cout << rep.finish(3);
    return 3;
  }

  rep.set_result("order", gf.group.order);
  rep.set_result("d_scale", gr.d_scale);
  rep.set_result("radii", gr.bumps.radii);
  rep.set_result("truncation", gr.bumps.truncation);
  rep.set_result("left_invariant", gr.output_left_invariant);
  rep.set_result("separation", separation_json(gr.separation));
  rep.set_result("triangle_after",
                 violations_json(gr.correction.violations_after));
  rep.set_result("correction", correction_function_json(gr.correction.f));
  rep.set_result("equivalence", equivalence_json(gr.equivalence));

  if (!out.empty()) {
    write_matrix_csv(gr.correction.corrected, out,
                     gr.correction.slack_bound());
    const std::string fn_path = swap_suffix(out, ".correction.json");
    write_text(fn_path,
               correction_function_json(gr.correction.f).dump(2) + "\n");
    rep.set_result("outputs", ordered_json{{"matrix", out},
                                           {"correction", fn_path}});
  }

  std::cout << rep.finish(0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "metfix: repair dissimilarity matrices into metrics and build "
      "left-invariant metrics on finite groups"};
  app.require_subcommand(1);

  CommonOpts validate_opts;
  CLI::App* validate =
      app.add_subcommand("validate", "check the pre-metric axioms and the "
                                     "triangle inequality");
  add_common(validate, validate_opts);

  CommonOpts analyze_opts;
  std::string grid_spec;
  bool envelope = false;
  std::string analyze_out;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "triangle-deficiency table, axiom checks, local modulus");
  add_common(analyze, analyze_opts);
  analyze->add_option("--grid", grid_spec,
                      "modulus evaluation grid as A:B:STEP");
  analyze->add_flag("--envelope", envelope,
                    "evaluate the deficiency with strict-upward rounding");
  analyze->add_option("--out", analyze_out,
                      "write (delta, omega) CSV here and the deficiency "
                      "table next to it");

  CommonOpts correct_opts;
  int depth = kDefaultDepth;
  double s_tolerance = kDefaultSTolerance;
  double continuity_threshold = kContinuityThreshold;
  std::string correct_out;
  CLI::App* correct = app.add_subcommand(
      "correct", "build a correction function and repair the input into a "
                 "metric");
  add_common(correct, correct_opts);
  correct->add_option("--depth", depth, "dyadic depth of the correction");
  correct->add_option("--s-tolerance", s_tolerance,
                      "bisection tolerance for feasibility searches");
  correct->add_option("--continuity-threshold", continuity_threshold,
                      "local-continuity gate as a fraction of the diameter");
  correct->add_option("--out", correct_out,
                      "write the corrected matrix here and the correction "
                      "function next to it");

  std::string group_path;
  int group_depth = kDefaultDepth;
  double group_s_tolerance = kDefaultSTolerance;
  std::string group_out;
  CLI::App* group = app.add_subcommand(
      "group", "left-invariant metric on a finite group from a bump family");
  group->add_option("path", group_path, "group JSON file")->required();
  group->add_option("--depth", group_depth,
                    "dyadic depth of the correction");
  group->add_option("--s-tolerance", group_s_tolerance,
                    "bisection tolerance for feasibility searches");
  group->add_option("--out", group_out,
                    "write the invariant metric here and the correction "
                    "function next to it");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(validate)) return cmd_validate(validate_opts);
    if (app.got_subcommand(analyze))
      return cmd_analyze(analyze_opts, grid_spec, envelope, analyze_out);
    if (app.got_subcommand(correct))
      return cmd_correct(correct_opts, depth, s_tolerance,
                         continuity_threshold, correct_out);
    if (app.got_subcommand(group))
      return cmd_group(group_path, group_depth, group_s_tolerance, group_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
