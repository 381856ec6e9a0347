#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metfix/group.hpp"
#include "metfix/premetric.hpp"

namespace metfix {

// Raw matrix file content before validation. `tolerance` is the optional
// embedded triangle slack a producing command documented for its output.
struct MatrixFile {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::optional<double> tolerance;
};

enum class MatrixFormat { autodetect, csv, json };

// CSV: optional `# labels: a,b,c` and `# tolerance: x` comment lines, other
// `#` lines ignored; then comma-separated numeric rows.
// JSON: [[...],...] or {"matrix":[[...]], "labels":[...], "tolerance":x}.
MatrixFile read_matrix_file(const std::string& path,
                            MatrixFormat format = MatrixFormat::autodetect);
MatrixFile parse_matrix_csv(std::istream& in);
MatrixFile parse_matrix_json(std::istream& in);

// Writes the matrix in the CSV input dialect (17 significant digits, so a
// round-trip is exact).
void write_matrix_csv(const PreMetric& pm, const std::string& path,
                      std::optional<double> tolerance = std::nullopt);
std::string matrix_csv_string(const PreMetric& pm,
                              std::optional<double> tolerance = std::nullopt);

// Group input: {"order":m, "mult":[[...]], "identity":0, "metric":[[...]]}
// with an explicit table, or {"generators":[[perm],...], "metric":"word"}
// for the closure of permutation generators under the word metric.
struct GroupFile {
  FiniteGroup group;
  PreMetric metric;
};
GroupFile read_group_file(const std::string& path);
GroupFile parse_group_json(std::istream& in);

// FNV-1a, for input digests in reports.
std::uint64_t fnv1a64(const std::string& bytes);

// Reads a whole file; throws validation_error(bad_format) when unreadable.
std::string slurp_file(const std::string& path);

}  // namespace metfix
