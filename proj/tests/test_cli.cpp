#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
  const char* bin = std::getenv("METFIX_BIN");
  REQUIRE_MESSAGE(bin != nullptr,
                  "METFIX_BIN must point at the metfix binary");
  const std::string cmd = std::string(bin) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

json parse_report(const std::string& text) {
  json j;
  REQUIRE_NOTHROW(j = json::parse(text));
  return j;
}

std::filesystem::path scratch() {
  const std::filesystem::path dir = "cli_scratch";
  std::filesystem::create_directories(dir);
  return dir;
}

void put_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 21 points on a line with the squared distance: a pre-metric with many
// triangle violations that the corrector can repair.
std::string squared_line_csv() {
  std::ostringstream os;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double d = (i - j) / 20.0;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d * d);
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("cli: validate a metric") {
  const auto dir = scratch();
  put_file(dir / "metric.csv", "0,1,2\n1,0,1\n2,1,0\n");
  const RunResult r = run_cli("validate " + (dir / "metric.csv").string());
  CHECK(r.code == 0);
  const json j = parse_report(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "validate");
  CHECK(j["input_digest"].get<std::string>().size() == 16);
  CHECK(j["exit_status"] == 0);
  CHECK(j["results"]["points"] == 3);
  CHECK(j["results"]["is_metric"] == true);
  CHECK(j["results"]["triangle"]["count"] == 0);
}

TEST_CASE("cli: validate reports violations with exit 1") {
  const auto dir = scratch();
  put_file(dir / "viol.csv", "0,1,3\n1,0,1\n3,1,0\n");
  const RunResult r = run_cli("validate " + (dir / "viol.csv").string());
  CHECK(r.code == 1);
  const json j = parse_report(r.out);
  CHECK(j["results"]["is_metric"] == false);
  CHECK(j["results"]["triangle"]["count"] == 1);
  const json w = j["results"]["triangle"]["worst"][0];
  CHECK(w["i"] == 0);
  CHECK(w["j"] == 1);
  CHECK(w["k"] == 2);
  CHECK(w["slack"] == 1.0);  // reported at the input scale
}

TEST_CASE("cli: input errors exit 2 with empty stdout") {
  const auto dir = scratch();
  put_file(dir / "asym.csv", "0,1\n2,0\n");
  const RunResult r = run_cli("validate " + (dir / "asym.csv").string());
  CHECK(r.code == 2);
  CHECK(r.out.empty());

  const RunResult merged =
      run_cli("validate " + (dir / "asym.csv").string(), true);
  CHECK(merged.out.find("error:") != std::string::npos);

  CHECK(run_cli("validate " + (dir / "does_not_exist.csv").string()).code ==
        2);
  CHECK(run_cli("validate").code == 2);            // missing argument
  CHECK(run_cli("frobnicate x.csv").code == 2);    // unknown subcommand
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("cli: --format overrides the extension") {
  const auto dir = scratch();
  put_file(dir / "actually_json.csv", "[[0,1],[1,0]]");
  const RunResult r = run_cli(
      "validate " + (dir / "actually_json.csv").string() + " --format json");
  CHECK(r.code == 0);
  CHECK(parse_report(r.out)["results"]["points"] == 2);
}

TEST_CASE("cli: analyze flags the failing qualitative axiom") {
  const auto dir = scratch();
  put_file(dir / "viol.csv", "0,1,3\n1,0,1\n3,1,0\n");
  const RunResult r = run_cli("analyze " + (dir / "viol.csv").string());
  CHECK(r.code == 1);
  const json j = parse_report(r.out);
  CHECK(j["results"]["scale"] == 3.0);
  CHECK(j["results"]["breakpoints"].size() == 3);
  CHECK(j["results"]["axioms"]["symmetric"] == true);
  CHECK(j["results"]["axioms"]["condition1"]["pass"] == false);
  CHECK(j["results"]["modulus"]["passes"] == false);
}

TEST_CASE("cli: analyze with an explicit grid and output files") {
  const auto dir = scratch();
  put_file(dir / "metric.csv", "0,1,2\n1,0,1\n2,1,0\n");
  const std::string out = (dir / "mod.csv").string();
  const RunResult r = run_cli("analyze " + (dir / "metric.csv").string() +
                              " --grid 0:1:0.01 --out " + out);
  CHECK(r.code == 0);
  const json j = parse_report(r.out);
  CHECK(j["results"]["modulus"]["deltas"].size() == 101);
  CHECK(j["results"]["modulus"]["deltas"][0] == 0.0);
  CHECK(j["results"]["modulus"]["deltas"][100] == 1.0);

  const std::string plot = read_file(dir / "mod.csv");
  CHECK(plot.rfind("# delta,omega\n", 0) == 0);
  CHECK(std::count(plot.begin(), plot.end(), '\n') == 102);
  const std::string td = read_file(dir / "mod.td.csv");
  CHECK(td.find("0,0.5,1") != std::string::npos);  // breakpoint row

  CHECK(run_cli("analyze " + (dir / "metric.csv").string() +
                " --grid 1:0:0.1")
            .code == 2);
}

TEST_CASE("cli: correct refuses the discontinuous instance with exit 3") {
  const auto dir = scratch();
  put_file(dir / "viol.csv", "0,1,3\n1,0,1\n3,1,0\n");
  const RunResult r = run_cli("correct " + (dir / "viol.csv").string());
  CHECK(r.code == 3);
  const json j = parse_report(r.out);
  CHECK(j["exit_status"] == 3);
  CHECK(j["results"].contains("error"));
  CHECK(j["results"]["modulus"]["passes"] == false);
  CHECK(j["results"]["triangle"]["count"] == 1);
}

TEST_CASE("cli: correct repairs and the output round-trips") {
  const auto dir = scratch();
  put_file(dir / "d2.csv", squared_line_csv());
  const std::string out = (dir / "fixed.csv").string();
  const RunResult r = run_cli("correct " + (dir / "d2.csv").string() +
                              " --depth 6 --out " + out);
  CHECK(r.code == 0);
  const json j = parse_report(r.out);
  CHECK(j["results"]["was_metric"] == false);
  CHECK(j["results"]["triangle_before"]["count"].get<int>() > 0);
  CHECK(j["results"]["triangle_after"]["count"] == 0);
  CHECK(j["results"]["subadditivity"]["pass"] == true);
  CHECK(j["results"]["slack_bound"] == 0.03125);
  CHECK(j["results"]["correction"]["depth"] == 6);
  CHECK(j["results"]["correction"]["r"].size() == 64);
  CHECK(j["results"]["correction"]["r"][0]["q"] == "1/64");

  // The written matrix validates as a metric thanks to the embedded slack.
  CHECK(run_cli("validate " + out).code == 0);
  const json fn = json::parse(read_file(dir / "fixed.correction.json"));
  CHECK(fn["depth"] == 6);
  CHECK(fn["r"].size() == 64);

  // Depth 1 collapses onto {0, 1/2, 1}.
  const RunResult d1 =
      run_cli("correct " + (dir / "d2.csv").string() + " --depth 1");
  CHECK(d1.code == 0);
  CHECK(parse_report(d1.out)["results"]["correction"]["r"].size() == 2);
}

TEST_CASE("cli: group pipeline on Z/8") {
  const auto dir = scratch();
  put_file(dir / "z8.json",
           R"({"generators": [[1,2,3,4,5,6,7,0]], "metric": "word"})");
  const RunResult r = run_cli("group " + (dir / "z8.json").string() +
                              " --depth 8");
  CHECK(r.code == 0);
  const json j = parse_report(r.out);
  CHECK(j["results"]["order"] == 8);
  CHECK(j["results"]["radii"] ==
        json(std::vector<double>{1.0, 0.375, 0.1875}));
  CHECK(j["results"]["truncation"] == 2);
  CHECK(j["results"]["left_invariant"] == true);
  CHECK(j["results"]["separation"].size() == 2);
  for (const auto& sb : j["results"]["separation"])
    CHECK(sb["pass"] == true);
  CHECK(j["results"]["triangle_after"]["count"] == 0);
}

TEST_CASE("cli: group rejects a broken table") {
  const auto dir = scratch();
  put_file(dir / "badgroup.json",
           R"({"mult": [[0,1],[1,1]], "metric": [[0,1],[1,0]]})");
  const RunResult r = run_cli("group " + (dir / "badgroup.json").string());
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("cli: reports are byte-for-byte deterministic") {
  const auto dir = scratch();
  put_file(dir / "d2.csv", squared_line_csv());
  put_file(dir / "z8.json",
           R"({"generators": [[1,2,3,4,5,6,7,0]], "metric": "word"})");

  for (const std::string args :
       {std::string("validate ") + (dir / "d2.csv").string(),
        std::string("analyze ") + (dir / "d2.csv").string(),
        std::string("correct ") + (dir / "d2.csv").string() + " --depth 5",
        std::string("group ") + (dir / "z8.json").string() + " --depth 5"}) {
    CAPTURE(args);
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
