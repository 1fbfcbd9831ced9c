#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdpw/cli.hpp"
#include "test_util.hpp"

using namespace cdpw;
using namespace cdpw::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

// Data rows of a CSV table (header and "#" lines dropped).
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  const auto lines = split(text, '\n');
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (!lines[i].empty() && lines[i][0] != '#') rows.push_back(split(lines[i], ','));
  return rows;
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("config parsing") {
  RunConfig cfg;
  apply_config_text(cfg, "# comment\n\nrel_tol = 1e-12\nquadrature_budget=4096\nformat=json\nseed=9\n",
                    "t");
  CHECK(cfg.tau.series.rel_tol == 1e-12);
  CHECK(cfg.tau.quadrature.max_panels == 4096);
  CHECK(cfg.format == Format::Json);
  CHECK(cfg.seed == 9);
  CHECK_THROWS_AS(apply_config_text(cfg, "nonsense=1\n", "t"), DomainError);
  CHECK_THROWS_AS(apply_config_text(cfg, "rel_tol\n", "t"), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "rel_tol", "abc"), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "format", "xml"), DomainError);
  RunConfig bad;
  apply_setting(bad, "rel_tol", "-1");
  CHECK_THROWS_AS(bad.validate(), DomainError);
  RunConfig zero;
  apply_setting(zero, "quadrature_tol", "0");
  CHECK_THROWS_AS(zero.validate(), DomainError);
  try {
    apply_config_text(cfg, "seed=1\nbogus=2\n", "file.cfg");
    FAIL("expected a throw");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("file.cfg:2:") == 0);
  }
  CHECK(config_keys().size() >= 15);
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("1.5") == Complex{1.5, 0.0});
  CHECK(parse_complex("-2i") == Complex{0.0, -2.0});
  CHECK(parse_complex("i") == Complex{0.0, 1.0});
  CHECK(parse_complex("1+0.5i") == Complex{1.0, 0.5});
  CHECK(parse_complex("0.25-3i") == Complex{0.25, -3.0});
  CHECK(parse_complex("1e-3+2e+1i") == Complex{1e-3, 20.0});
  CHECK_THROWS_AS(parse_complex("1+x"), DomainError);
  CHECK_THROWS_AS(parse_complex(""), DomainError);
}

TEST_CASE("table output") {
  Table t({"name", "x", "n", "ok"});
  t.add_row({std::string("a,b"), 0.1, 3LL, true});
  t.add_note("max", 2.0);
  std::ostringstream csv, json;
  t.write(csv, Format::Csv, 17);
  t.write(json, Format::Json, 17);
  CHECK(csv.str() == "name,x,n,ok\n\"a,b\",0.10000000000000001,3,true\n# max,2\n");
  CHECK(json.str() ==
        "{\"name\":\"a,b\",\"x\":0.10000000000000001,\"n\":3,\"ok\":true}\n{\"summary\":\"max\",\"value\":2}\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("eval") {
  const Run r = run_cli({"eval", "--sign", "post", "--gamma", "0", "--l", "1", "--kr", "1"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(num(rows[0][5])) < 1e-15);
  CHECK(std::abs(num(rows[0][6]) - 0.3011686789) < 1e-10);

  const Run zero = run_cli({"eval", "--gamma", "0", "--l", "1", "--kr", "0"});
  CHECK(zero.code == kExitBadInput);
  CHECK(zero.err.find("kr > 0") != std::string::npos);

  const Run q = run_cli({"--precision", "10", "eval", "--gamma", "1", "--l", "0", "--kr", "2",
                         "--method", "quadrature"});
  const Run h = run_cli({"--precision", "10", "eval", "--gamma", "1", "--l", "0", "--kr", "2",
                         "--method", "hyp2f2"});
  REQUIRE(q.code == kExitOk);
  REQUIRE(h.code == kExitOk);
  const auto qr = csv_rows(q.out), hr = csv_rows(h.out);
  CHECK(qr[0][5] == hr[0][5]);
  CHECK(qr[0][6] == hr[0][6]);

  CHECK(run_cli({"eval", "--gamma", "1", "--l", "0", "--kr", "2", "--method", "bogus"}).code ==
        kExitBadInput);
  CHECK(run_cli({"eval", "--gamma", "1", "--l", "-1", "--kr", "2"}).code == kExitBadInput);
  CHECK(run_cli({"eval", "--gamma", "1", "--l", "0"}).code == kExitBadInput);
  CHECK(run_cli({"frobnicate"}).code == kExitBadInput);
  CHECK(run_cli({}).code == kExitBadInput);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

TEST_CASE("numerical failures map to exit 3") {
  const std::string path = "test_cli_budget.cfg";
  {
    std::ofstream f(path);
    f << "quadrature_budget=8\n";
  }
  const Run r = run_cli({"--config", path, "eval", "--gamma", "1", "--l", "3", "--kr", "20", "--method",
                         "quadrature"});
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("tau_quadrature") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("json output") {
  const Run r = run_cli({"--format", "json", "eval", "--gamma", "0.5", "--l", "2", "--kr", "1", "3"});
  REQUIRE(r.code == kExitOk);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() == 2);
  for (const auto& line : lines) {
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    CHECK(line.find("\"method\":") != std::string::npos);
  }
}

TEST_CASE("config file and flag precedence") {
  const std::string path = "test_cli_config.cfg";
  {
    std::ofstream f(path);
    f << "format=json\ncsv_precision=5\n";
  }
  const Run from_file = run_cli({"--config", path, "eval", "--gamma", "1", "--l", "0", "--kr", "2"});
  CHECK(from_file.out.front() == '{');
  const Run flag = run_cli({"--config", path, "--format", "csv", "eval", "--gamma", "1", "--l", "0",
                            "--kr", "2"});
  REQUIRE(flag.code == kExitOk);
  const auto rows = csv_rows(flag.out);
  CHECK(rows[0][5].size() <= 7);
  {
    std::ofstream f(path);
    f << "threads=0\n";
  }
  CHECK(run_cli({"--config", path, "eval", "--gamma", "1", "--l", "0", "--kr", "2"}).code ==
        kExitBadInput);
  CHECK(run_cli({"--config", "no/such/file", "eval", "--gamma", "1", "--l", "0", "--kr", "2"}).code ==
        kExitBadInput);
  std::remove(path.c_str());
}

TEST_CASE("output is independent of the thread count") {
  const std::vector<std::string> args{"validate", "--only", "tau", "symmetry", "--gamma", "0.5",
                                      "--kr", "0.5", "5", "--lmax", "3"};
  auto with_threads = [&](const char* n) {
    std::vector<std::string> a{"--threads", n};
    a.insert(a.end(), args.begin(), args.end());
    return run_cli(a);
  };
  const Run one = with_threads("1");
  const Run four = with_threads("4");
  CHECK(one.code == kExitOk);
  CHECK(one.out == four.out);
  CHECK(one.out == with_threads("1").out);
}

TEST_CASE("validate") {
  const Run prop1 = run_cli({"validate", "--only", "prop1"});
  CHECK(prop1.code == kExitOk);
  for (const auto& row : csv_rows(prop1.out)) CHECK(row[0] == "prop1");
  CHECK(prop1.out.find("# pass,true") != std::string::npos);

  const Run integer = run_cli({"validate", "--a", "2"});
  CHECK(integer.code == kExitBadInput);
  CHECK(integer.err.find("integer") != std::string::npos);

  CHECK(run_cli({"validate", "--only", "nonsense"}).code == kExitBadInput);
  CHECK(run_cli({"validate", "--only", "f22", "--a", "0.5+1i", "--lmax", "2", "--kr", "1", "10"})
            .code == kExitOk);

  const Run random = run_cli({"--seed", "5", "validate", "--random", "6", "--only", "tau", "coeffs"});
  CHECK(random.code == kExitOk);
  CHECK(random.out == run_cli({"--seed", "5", "validate", "--random", "6", "--only", "tau", "coeffs"}).out);
  CHECK(random.out != run_cli({"--seed", "6", "validate", "--random", "6", "--only", "tau", "coeffs"}).out);

  // Loose series tolerances break the agreement and are reported as failures.
  const std::string path = "test_cli_validate.cfg";
  {
    std::ofstream f(path);
    f << "rel_tol=1e-4\n";
  }
  const Run loose = run_cli({"--config", path, "validate", "--only", "tau", "--gamma", "1", "--kr",
                             "5", "--lmax", "2"});
  CHECK(loose.code == kExitValidationFailure);
  CHECK(loose.err.find("tau failed at") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("coeffs") {
  const Run r = run_cli({"coeffs", "--gamma", "1", "--l", "1", "--N", "4"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"0", "1", "0", "1", "0", "0"});
  CHECK(num(rows[1][1]) == -1.0);
  CHECK(num(rows[1][2]) == -0.5);
  CHECK(num(rows[1][3]) == -1.0);
  CHECK(num(rows[1][4]) == -0.5);

  const Run w = run_cli({"coeffs", "--gamma", "0.5", "--l", "4", "--N", "20"});
  REQUIRE(w.code == kExitOk);
  for (const auto& row : csv_rows(w.out)) CHECK(num(row[5]) < 1e-12);

  CHECK(run_cli({"coeffs", "--gamma", "1", "--l", "1", "--N", "65"}).code == kExitBadInput);
  CHECK(run_cli({"coeffs", "--gamma", "0", "--l", "1"}).code == kExitBadInput);
}

TEST_CASE("asymp-compare") {
  const Run r = run_cli({"asymp-compare", "--gamma", "1", "--l", "2", "--kr", "50", "100", "200",
                         "--N", "3"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row[8] == "3");
    CHECK(row[9] == "false");
    CHECK(num(row[7]) > 0.0);
  }

  const Run j0 = run_cli({"asymp-compare", "--gamma", "0", "--l", "0", "--kr", "50", "100"});
  REQUIRE(j0.code == kExitOk);
  for (const auto& row : csv_rows(j0.out)) {
    const double kr = num(row[0]);
    CHECK(std::abs(num(row[1]) - std::sin(kr) / kr) < 1e-15);
    CHECK(std::abs(num(row[3]) - std::sin(kr) / kr) < 1e-15);
  }

  const Run onset = run_cli({"asymp-compare", "--gamma", "1", "--l", "2", "--kr", "50", "--N", "200"});
  CHECK(onset.code == kExitOk);
  CHECK(csv_rows(onset.out)[0][9] == "true");
  CHECK(onset.err.find("warning") != std::string::npos);

  CHECK(run_cli({"asymp-compare", "--gamma", "1", "--l", "2", "--kr", "1"}).code == kExitBadInput);
  CHECK(run_cli({"asymp-compare", "--gamma", "1", "--l", "2", "--kr", "50", "--N", "x"}).code ==
        kExitBadInput);
}

TEST_CASE("reconstruct") {
  const Run r = run_cli({"reconstruct", "--gamma", "0", "--kr", "1", "--cos", "-0.9", "-0.3", "0.4",
                         "0.9", "--lmax", "40"});
  REQUIRE(r.code == kExitOk);
  CHECK(csv_rows(r.out).size() == 4);
  const auto pos = r.out.find("# max_abs_diff,");
  REQUIRE(pos != std::string::npos);
  CHECK(num(r.out.substr(pos + 15)) < 1e-10);

  const Run excluded = run_cli({"reconstruct", "--sign", "post", "--gamma", "1", "--kr", "1", "--cos", "1"});
  CHECK(excluded.code == kExitBadInput);
  CHECK(excluded.err.find("excluded direction") != std::string::npos);
  CHECK(run_cli({"reconstruct", "--sign", "prior", "--gamma", "1", "--kr", "1", "--cos", "1"}).code ==
        kExitOk);
  CHECK(run_cli({"reconstruct", "--gamma", "1", "--kr", "1", "--cos", "1.5"}).code == kExitBadInput);
}

TEST_CASE("asy3d") {
  const Run r = run_cli({"asy3d", "--gamma", "0", "--coeffs", "1", "--kr", "50", "100"});
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    const double kr = num(row[1]);
    // (2 pi / (i kr)) (e^{ikr} - e^{-ikr}) = 4 pi sin(kr) / kr
    CHECK(std::abs(num(row[4]) - 4.0 * kPi * std::sin(kr) / kr) < 1e-14);
    CHECK(std::abs(num(row[5])) < 1e-14);
  }

  const Run g1 = run_cli({"asy3d", "--gamma", "1", "--coeffs", "1", "1", "--kr", "50", "100", "200", "400"});
  REQUIRE(g1.code == kExitOk);
  const auto g1_rows = csv_rows(g1.out);
  REQUIRE(g1_rows.size() == 8);
  CHECK(g1_rows[0][0] == "1");
  CHECK(g1_rows[4][0] == "0");

  CHECK(run_cli({"asy3d", "--gamma", "1", "--coeffs", "nan", "--kr", "50"}).code == kExitBadInput);
  CHECK(run_cli({"asy3d", "--gamma", "1", "--coeffs", "1", "--kr", "-5"}).code == kExitBadInput);
}

TEST_CASE("output file") {
  const std::string path = "test_cli_out.csv";
  const Run r = run_cli({"--out", path, "coeffs", "--gamma", "1", "--l", "1", "--N", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("n,rec_re", 0) == 0);
  std::remove(path.c_str());
}
