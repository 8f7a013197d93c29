#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "cli_app.hpp"
#include "qs/ranges.hpp"
#include "qs/report.hpp"
#include "qs/sieve.hpp"

using namespace qs;
using nlohmann::json;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path fresh_dir(const char* tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("qs-") + tag + "-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("report_cli") {

TEST_CASE("range syntax: expansion") {
  CHECK(parse_range("1..5:odd") == std::vector<std::int64_t>{1, 3, 5});
  CHECK(parse_range("2..10:even") == std::vector<std::int64_t>{2, 4, 6, 8, 10});
  CHECK(parse_range("7") == std::vector<std::int64_t>{7});
  CHECK(parse_range("-3..3:odd") == std::vector<std::int64_t>{-3, -1, 1, 3});
  const auto sym = parse_range("-25..25");
  CHECK(sym.size() == 51);
  CHECK(sym.front() == -25);
  CHECK(sym[25] == 0);
  CHECK(sym.back() == 25);
}

TEST_CASE("range syntax: rejections and extremes") {
  CHECK_THROWS_AS(parse_range(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("5..1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("1..5:weird"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("0..20000000"), std::invalid_argument);
  // the top of the integer range must not wrap
  CHECK(parse_range("9223372036854775806..9223372036854775807") ==
        std::vector<std::int64_t>{9223372036854775806LL, INT64_MAX});
  CHECK(parse_range("9223372036854775807") == std::vector<std::int64_t>{INT64_MAX});
}

TEST_CASE("report finishing: schema stamp, layout, trailing newline") {
  const json report = finalize_report(json{{"x", 1}});
  CHECK(report["schema"] == 1);
  CHECK(report["meta"]["tool"] == "qs");
  CHECK(report["meta"]["version"] == "0.1.0");
  CHECK(report["x"] == 1);
  const std::string text = render_report(report);
  CHECK(text.back() == '\n');
  CHECK(text == report.dump(2) + "\n");
}

TEST_CASE("atomic writes create and replace files") {
  const auto dir = fresh_dir("atomic");
  const auto path = dir / "nested" / "report.json";
  write_text_atomic(path, "first\n");
  CHECK(slurp(path) == "first\n");
  write_text_atomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical inputs give identical report bytes") {
  const EscalationResult res = escalate_range(2, 840, 1, 1, 0, 0, 10000, nullptr, 2);
  const std::string once = render_report(finalize_report(sieve_report_json(res)));
  const std::string twice = render_report(finalize_report(sieve_report_json(res)));
  CHECK(once == twice);
  CHECK(once.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("cli: usage errors and help") {
  CHECK(run_cli({}).code == 2);
  const CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("sieve") != std::string::npos);
  CHECK(help.out.find("prove-t2") != std::string::npos);
  CHECK(help.out.find("descent") != std::string::npos);
  CHECK(run_cli({"sieve"}).code == 2);                      // missing --t
  CHECK(run_cli({"sieve", "--t", "2", "--bogus"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"brute", "--t", "2", "--A", "3"}).code == 2);  // mixed modes
  CHECK(run_cli({"descent", "--n", "5"}).code == 2);            // outside classes
}

TEST_CASE("cli: sieve reproduces the pinned configuration") {
  const CliResult r = run_cli({"sieve", "--t", "2", "--m", "840", "--r", "1", "--s", "0",
                               "--prime-bound", "10000", "--jobs", "2"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["schema"] == 1);
  CHECK(rep["t"] == 2);
  CHECK(rep["M"] == 1680);
  CHECK(rep["factor_base"].size() == 27);
  CHECK(rep["survivors_mod_m"] == json::array({1, 3, 837, 839}));
  CHECK(rep["converged"] == true);
}

TEST_CASE("cli: descent chain certificate on stdout") {
  const CliResult r = run_cli({"descent", "--n", "841"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["kind"] == "chain");
  CHECK(rep["requested_n"] == 841);
  CHECK(rep["certificate"]["b"] == 21);
  CHECK(rep["certificate"]["jacobi_value"] == -1);
  CHECK(rep["certificate"]["valid"] == true);
}

TEST_CASE("cli: scan output is run-to-run identical") {
  const std::vector<std::string> args{"scan", "--d", "3", "--i", "1..3:odd",
                                      "--w", "-5..5", "--sign", "plus", "--jobs", "4"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json rep = json::parse(a.out);
  CHECK(rep["tested"].size() == 20);
  CHECK(rep["exceptions"].empty());
}

TEST_CASE("cli: expectations gate the exit code") {
  CHECK(run_cli({"reduce", "--A", "3", "--B", "2", "--expect", "t=2"}).code == 0);
  const CliResult bad = run_cli({"reduce", "--A", "3", "--B", "2", "--expect", "t=3"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("expect") != std::string::npos);
  CHECK(run_cli({"reduce", "--A", "3", "--B", "2", "--expect", "no.such.key=1"}).code == 1);
}

TEST_CASE("cli: --out writes the report to a file") {
  const auto dir = fresh_dir("out");
  const auto path = (dir / "red.json").string();
  const CliResult r = run_cli({"reduce", "--A", "5", "--B", "11", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const json rep = json::parse(slurp(path));
  CHECK(rep["t"] == "44");
  CHECK(rep["a0"] == "3");
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: cache directory resolution and reuse") {
  const auto env_dir = fresh_dir("cache-env");
  const auto flag_dir = fresh_dir("cache-flag");
  const std::vector<std::string> base{"sieve", "--t", "2", "--m", "840", "--r", "1",
                                      "--s", "0", "--prime-bound", "10000"};
  setenv("QS_CACHE_DIR", env_dir.c_str(), 1);

  auto with = [&base](std::initializer_list<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra);
    return args;
  };
  const CliResult cold = run_cli(with({}));
  CHECK(cold.code == 0);
  CHECK(std::filesystem::exists(env_dir / "fb-t2-M1680-pb10000.json"));

  const CliResult warm = run_cli(with({}));
  CHECK(warm.out == cold.out);

  // an explicit flag beats the environment
  const CliResult flagged = run_cli(with({"--cache-dir", flag_dir.string()}));
  CHECK(flagged.out == cold.out);
  CHECK(std::filesystem::exists(flag_dir / "fb-t2-M1680-pb10000.json"));

  unsetenv("QS_CACHE_DIR");
  std::filesystem::remove_all(env_dir);
  std::filesystem::remove_all(flag_dir);
}

TEST_CASE("cli: version string") {
  const CliResult r = run_cli({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find("qs 0.1.0") != std::string::npos);
}

}  // TEST_SUITE
