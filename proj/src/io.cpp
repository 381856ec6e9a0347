#include "metfix/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace metfix {

namespace {

using nlohmann::json;

[[noreturn]] void bad_input(const std::string& what) {
  throw validation_error(validation_error::kind::bad_format, what);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (trim(tok.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  bad_input("line " + std::to_string(line_no) + ": '" + tok +
            "' is not a number");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

json parse_json_stream(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad_input(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<std::vector<double>> matrix_from_json(const json& j) {
  if (!j.is_array()) bad_input("matrix must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) bad_input("matrix rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) bad_input("matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

MatrixFile parse_matrix_csv(std::istream& in) {
  MatrixFile mf;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("labels:", 0) == 0)
        mf.labels = split(body.substr(7), ',');
      else if (body.rfind("tolerance:", 0) == 0)
        mf.tolerance = parse_number(trim(body.substr(10)), line_no);
      continue;
    }
    std::vector<double> row;
    for (const std::string& tok : split(line, ','))
      row.push_back(parse_number(tok, line_no));
    mf.rows.push_back(std::move(row));
  }
  if (mf.rows.empty()) bad_input("no matrix rows found");
  return mf;
}

MatrixFile parse_matrix_json(std::istream& in) {
  const json j = parse_json_stream(in);
  MatrixFile mf;
  if (j.is_array()) {
    mf.rows = matrix_from_json(j);
    return mf;
  }
  if (!j.is_object() || !j.contains("matrix"))
    bad_input("expected a JSON array of rows or an object with 'matrix'");
  mf.rows = matrix_from_json(j.at("matrix"));
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) {
      if (!l.is_string()) bad_input("labels must be strings");
      mf.labels.push_back(l.get<std::string>());
    }
  }
  if (j.contains("tolerance")) {
    if (!j.at("tolerance").is_number()) bad_input("tolerance must be a number");
    mf.tolerance = j.at("tolerance").get<double>();
  }
  return mf;
}

MatrixFile read_matrix_file(const std::string& path, MatrixFormat format) {
  if (format == MatrixFormat::autodetect) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    format = ext == ".json" ? MatrixFormat::json : MatrixFormat::csv;
  }
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path + "'");
  return format == MatrixFormat::json ? parse_matrix_json(in)
                                      : parse_matrix_csv(in);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string matrix_csv_string(const PreMetric& pm,
                              std::optional<double> tolerance) {
  std::ostringstream os;
  if (!pm.labels.empty()) {
    os << "# labels: ";
    for (std::size_t i = 0; i < pm.labels.size(); ++i)
      os << (i ? "," : "") << pm.labels[i];
    os << "\n";
  }
  if (tolerance) os << "# tolerance: " << format_double(*tolerance) << "\n";
  for (std::size_t i = 0; i < pm.n; ++i) {
    for (std::size_t j = 0; j < pm.n; ++j)
      os << (j ? "," : "") << format_double(pm.at(i, j));
    os << "\n";
  }
  return os.str();
}

void write_matrix_csv(const PreMetric& pm, const std::string& path,
                      std::optional<double> tolerance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_input("cannot write '" + path + "'");
  out << matrix_csv_string(pm, tolerance);
}

GroupFile parse_group_json(std::istream& in) {
  const json j = parse_json_stream(in);
  if (!j.is_object()) bad_input("group file must be a JSON object");

  GroupFile gf;
  if (j.contains("mult")) {
    if (!j.at("mult").is_array()) bad_input("'mult' must be an array of rows");
    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : j.at("mult")) {
      std::vector<std::size_t> r;
      for (const auto& v : row) {
        if (!v.is_number_unsigned()) bad_input("'mult' entries must be indices");
        r.push_back(v.get<std::size_t>());
      }
      table.push_back(std::move(r));
    }
    gf.group = group_from_table(table);
    if (j.contains("order") &&
        j.at("order").get<std::size_t>() != gf.group.order)
      bad_input("'order' does not match the table size");
    if (j.contains("identity") &&
        j.at("identity").get<std::size_t>() != gf.group.identity)
      bad_input("'identity' does not match the table");

    if (!j.contains("metric") || !j.at("metric").is_array())
      bad_input("table-form group needs a 'metric' matrix");
    const auto rows = matrix_from_json(j.at("metric"));
    gf.metric = validate_premetric(rows).premetric;
    if (gf.metric.n != gf.group.order)
      bad_input("metric size does not match group order");
    return gf;
  }

  if (!j.contains("generators"))
    bad_input("group file needs 'mult' or 'generators'");
  std::vector<std::vector<std::size_t>> perms;
  for (const auto& p : j.at("generators")) {
    std::vector<std::size_t> perm;
    for (const auto& v : p) {
      if (!v.is_number_unsigned()) bad_input("generators must be index arrays");
      perm.push_back(v.get<std::size_t>());
    }
    perms.push_back(std::move(perm));
  }
  if (!j.contains("metric") || j.at("metric") != json("word"))
    bad_input("generator-form group needs \"metric\": \"word\"");
  GeneratedGroup gen = group_from_generators(perms);
  gf.group = std::move(gen.group);
  gf.metric = word_metric(gf.group, gen.generator_elements);
  return gf;
}

GroupFile read_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path + "'");
  return parse_group_json(in);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_input("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace metfix
