#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cmcert/constants.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cmcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cmcert::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cmcert_cli_test_" + name);
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("eval") {
  auto r = run({"eval", "g", "1", "--prec", "128"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "g(1) = 9.6354651222545796879"));
  CHECK(contains(r.out, " ± "));
  r = run({"eval", "p", "0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "p(0) = 450  (~ 4.5"));
  r = run({"eval", "psi1", "1", "--prec", "128"});
  CHECK(contains(r.out, "psi1(1) = 1.6449340668"));
  r = run({"eval", "polygamma", "1/2", "--m", "3"});
  CHECK(contains(r.out, "psi^(3)(1/2) = 9.74090910340024372364"));
  r = run({"eval", "B", "1"});
  CHECK(contains(r.out, "B(1) = 189241/921600"));
  r = run({"eval", "H", "0.05"});
  CHECK(contains(r.out, "H(1/20) = 9.0505910896773175870"));
}

TEST_CASE("eval errors exit with 2") {
  CHECK(run({"eval", "g", "0"}).code == 2);
  CHECK(run({"eval", "g", "abc"}).code == 2);
  CHECK(run({"eval", "zeta", "1"}).code == 2);
  CHECK(run({"eval", "g", "1", "--prec", "4"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("precision from the environment") {
  setenv("CMCERT_PREC", "64", 1);
  const auto r = run({"eval", "psi1", "1"});
  unsetenv("CMCERT_PREC");
  CHECK(contains(r.out, "@64 bits"));
}

TEST_CASE("identity checks") {
  CHECK(run({"identity-check", "expansion"}).code == 0);
  CHECK(run({"identity-check", "remark2"}).code == 0);
  const auto r = run({"identity-check", "telescoping", "--x", "1", "--prec", "192"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "pass"));
  CHECK(run({"identity-check", "telescoping"}).code == 2);
  CHECK(run({"identity-check", "nonsense"}).code == 2);
}

TEST_CASE("replay-proof") {
  const auto a = run({"replay-proof", "--emit", "-"});
  const auto b = run({"replay-proof", "--emit", "-"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "\"verdict\": \"pass\""));

  const auto path = temp_path("certificate.json");
  const auto c = run({"replay-proof", "--emit", path.string()});
  CHECK(c.code == 0);
  CHECK(contains(c.out, "verdict: pass"));
  std::ifstream f(path);
  std::stringstream written;
  written << f.rdbuf();
  CHECK(written.str() == a.out);
  std::filesystem::remove(path);

  CHECK(run({"replay-proof", "--emit", "/nonexistent-dir/cert.json"}).code == 2);
}

TEST_CASE("replay-proof against a corrupted constants file") {
  cmcert::ConstantTable t = cmcert::ConstantTable::builtin();
  t.set("theta2_d9[1][0]", t.get("theta2_d9[1][0]") + 1);
  const auto path = temp_path("corrupt.txt");
  std::ofstream(path) << t.canonical_text();
  const auto r = run({"--constants", path.string(), "replay-proof"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "first failure: step 1"));
  std::filesystem::remove(path);

  CHECK(run({"--constants", CMCERT_CONSTANTS_FILE, "replay-proof"}).code == 0);
  CHECK(run({"--constants", "/nonexistent/file.txt", "replay-proof"}).code == 2);
}

TEST_CASE("cm-scan") {
  auto r = run({"cm-scan", "g", "--kmax", "0", "--grid", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("k,x,mid,rad,verdict\n0,1,", 0) == 0);
  CHECK(contains(r.out, ",positive\n"));
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);

  r = run({"cm-scan", "H", "--kmax", "2", "--geom", "1/10,2,4", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"kind\": \"H\""));

  const auto path = temp_path("scan.txt");
  r = run({"cm-scan", "g", "--kmax", "1", "--grid", "1,2", "--output", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);

  CHECK(run({"cm-scan", "g", "--kmax", "20"}).code == 2);
  CHECK(run({"cm-scan", "g", "--grid", "1", "--geom", "1,2,3"}).code == 2);
  CHECK(run({"cm-scan", "g", "--format", "xml"}).code == 2);
  CHECK(run({"cm-scan", "f"}).code == 2);
}

TEST_CASE("cm-scan defaults") {
  const auto r = run({"cm-scan", "g", "--kmax", "8"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "225 positive, 0 indeterminate, 0 negative"));
}

TEST_CASE("inequality-scan and decay-check") {
  auto r = run({"inequality-scan", "--grid", "1/16,1,64"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "3 strict"));
  r = run({"decay-check", "g", "--jmax", "10"});
  CHECK(r.code == 0);
  r = run({"decay-check", "H", "--jmax", "2"});
  CHECK(r.code == 1);
  r = run({"decay-check", "g", "--jmax", "17"});
  CHECK(r.code == 2);
}
