#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfft/cli.hpp"
#include "gfft/config.hpp"

using namespace gfft;

namespace {

std::string data_path(const std::string& name) { return "data/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempFile {
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("sections, repeated keys, comments") {
    std::istringstream in(
        "[measure]\n"
        "atom = 1 0 : 1 2  # trailing comment\n"
        "atom = 0 1 : 0 1\n"
        "[run]\n"
        "q0 = 0.25 ; other comment style\n");
    const auto rc = parse_run_config(in);
    REQUIRE(rc.atoms.size() == 2);
    CHECK(rc.atoms[0].coef == cplx(1.0, 0.0));
    CHECK(rc.atoms[1].density_poly == std::vector<double>{0.0, 1.0});
    CHECK(rc.q0 == 0.25);
    CHECK(rc.space->n() == 1024);  // default grid
  }
  SUBCASE("grid override") {
    std::istringstream in("[measure]\natom = 1 0 : 1\n");
    const auto rc = parse_run_config(in, 128);
    CHECK(rc.space->n() == 128);
  }
  SUBCASE("malformed atom") {
    std::istringstream in("[measure]\natom = 1 0 1\n");
    CHECK_THROWS_WITH_AS(parse_run_config(in), doctest::Contains("atom"), std::runtime_error);
  }
  SUBCASE("bad number") {
    std::istringstream in("[elements]\ng1 = 1 two 3\n");
    CHECK_THROWS_WITH_AS(parse_run_config(in), doctest::Contains("two"), std::runtime_error);
  }
  SUBCASE("missing element lookup") {
    std::istringstream in("[measure]\natom = 1 0 : 1\n");
    const auto rc = parse_run_config(in, 64);
    CHECK_THROWS_WITH_AS(rc.element("nope"), doctest::Contains("nope"), std::runtime_error);
  }
  SUBCASE("inadmissible boundary parameters") {
    std::istringstream in("[run]\nq0 = 2.0\nq1 = 1.0\nq2 = -3.0\n");
    const auto rc = parse_run_config(in, 64);
    CHECK_THROWS_AS(rc.check_q_admissible(), std::runtime_error);
  }
}

TEST_CASE("cli: validate on a good config") {
  CHECK(cli::run({"validate", "--config", data_path("ok.cfg")}) == 0);
}

TEST_CASE("cli: boundary parameter inside the excluded band is a usage error") {
  CHECK(cli::run({"gfft", "--config", data_path("bad_q.cfg")}) == 1);
}

TEST_CASE("cli: unknown subcommand and missing config") {
  CHECK(cli::run({"frobnicate"}) == 1);
  CHECK(cli::run({"eval"}) == 1);
  CHECK(cli::run({"eval", "--config", "no_such_file.cfg"}) == 1);
}

TEST_CASE("cli: closed-form first-variation identity passes end to end") {
  TempFile out("cs_feynman_out.csv");
  CHECK(cli::run({"verify", "cs-feynman", "--config", data_path("one_atom.cfg"), "--samples",
                  "2000", "--out", out.path}) == 0);
  const std::string body = slurp(out.path);
  CHECK(body.find("theorem_id,") == 0);
  CHECK(body.find("cs-feynman,") != std::string::npos);
  CHECK(body.find(",true") != std::string::npos);
}

TEST_CASE("cli: identical config and seed give byte-identical reports") {
  TempFile a("det_a.csv"), b("det_b.csv");
  const int rc1 = cli::run({"verify", "cs-mu", "--config", data_path("one_atom.cfg"),
                            "--samples", "2000", "--seed", "5", "--out", a.path});
  const int rc2 = cli::run({"verify", "cs-mu", "--config", data_path("one_atom.cfg"),
                            "--samples", "2000", "--seed", "5", "--out", b.path});
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("cli: reports do not depend on the worker count") {
  TempFile a("thr_a.csv"), b("thr_b.csv");
  setenv("GFFT_THREADS", "1", 1);
  const int rc1 = cli::run({"verify", "scale", "--config", data_path("two_atom_drift.cfg"),
                            "--samples", "4000", "--seed", "8", "--out", a.path});
  setenv("GFFT_THREADS", "8", 1);
  const int rc2 = cli::run({"verify", "scale", "--config", data_path("two_atom_drift.cfg"),
                            "--samples", "4000", "--seed", "8", "--out", b.path});
  unsetenv("GFFT_THREADS");
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("cli: sampled paths CSV") {
  TempFile out("paths.csv");
  CHECK(cli::run({"sample-paths", "--config", data_path("ok.cfg"), "--count", "3", "--seed",
                  "9", "--out", out.path}) == 0);
  const std::string body = slurp(out.path);
  CHECK(body.find("path_id,t,x\n") == 0);
  CHECK(body.find("\n2,") != std::string::npos);  // third path present
}

TEST_CASE("cli: every verify target runs green on the full sample config") {
  for (const std::string target : {"translation", "lemma", "section9"}) {
    CAPTURE(target);
    TempFile out("all_" + target + ".csv");
    CHECK(cli::run({"verify", target, "--config", data_path("two_atom_drift.cfg"), "--samples",
                    "1000", "--seed", "4", "--out", out.path}) == 0);
    CHECK(slurp(out.path).find("theorem_id,") == 0);
  }
}

TEST_CASE("cli: validate writes a CSV report") {
  TempFile out("validate.csv");
  CHECK(cli::run({"validate", "--config", data_path("ok.cfg"), "--out", out.path}) == 0);
  const std::string body = slurp(out.path);
  CHECK(body.find("check,pass,measured,note") == 0);
  CHECK(body.find("true") != std::string::npos);
}

TEST_CASE("cli: residual chart is written for the limit verifier") {
  TempFile csv("limit.csv"), svg("limit.svg");
  const int rc = cli::run({"verify", "limit", "--config", data_path("two_atom_drift.cfg"),
                           "--samples", "2000", "--out", csv.path, "--svg", svg.path});
  CHECK(rc == 0);
  const std::string chart = slurp(svg.path);
  CHECK(chart.find("<svg") == 0);
  CHECK(chart.find("polyline") != std::string::npos);
}

TEST_CASE("float formatting is shortest-roundtrip stable") {
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(cli::format_double(1.0) == "1");
  const double v = 0.30000000000000004;
  CHECK(std::stod(cli::format_double(v)) == v);
}
