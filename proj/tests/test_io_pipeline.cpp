#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "zetadyn/pipeline.hpp"

using namespace zetadyn;
using mp::Complex;
using mp::Real;

namespace fs = std::filesystem;

namespace {

std::string zeros_path() {
  const char* env = std::getenv("ZETADYN_ZEROS");
  return env ? env : "data/zeta_zeros.txt";
}

orbit::Branch small_branch(const PrecisionContext& ctx) {
  Complex rho1 = rootfind::refine_zero(14.134725, ctx);
  Complex rho2 = rootfind::refine_zero(21.022040, ctx);
  Complex psi = pipeline::find_psi_in_gap(rho1, rho1.im().to_double(), rho2.im().to_double(), ctx);
  return pipeline::make_branch(rho1, psi, 12, ctx);
}

}  // namespace

TEST_CASE("branch files round-trip bit-exactly") {
  PrecisionContext ctx = PrecisionContext::make(80);
  orbit::Branch b = small_branch(ctx);
  fs::create_directories("io_test_out");
  io::write_branch(b, "io_test_out/branch.txt", {"roundtrip test"});
  orbit::Branch r = io::read_branch("io_test_out/branch.txt");

  REQUIRE(r.length() == b.length());
  CHECK(r.digits == b.digits);
  CHECK(r.anchor.length() == b.anchor.length());
  CHECK(mp::identical(r.root.re(), b.root.re()));
  CHECK(mp::identical(r.root.im(), b.root.im()));
  for (long k = 0; k < b.length(); ++k) {
    CHECK(mp::identical(r.elements[k].re(), b.elements[k].re()));
    CHECK(mp::identical(r.elements[k].im(), b.elements[k].im()));
    CHECK(mp::identical(r.residuals[k], b.residuals[k]));
  }
  for (long j = 0; j < b.anchor.length(); ++j) {
    CHECK(mp::identical(r.anchor.elements[j].re(), b.anchor.elements[j].re()));
    CHECK(mp::identical(r.anchor.elements[j].im(), b.anchor.elements[j].im()));
  }

  // a second write of the reread branch is byte-identical
  io::write_branch(r, "io_test_out/branch2.txt", {"roundtrip test"});
  std::ifstream f1("io_test_out/branch.txt"), f2("io_test_out/branch2.txt");
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
}

TEST_CASE("ordinate ingestion: happy path, blank lines, malformed input") {
  fs::create_directories("io_test_out");
  {
    std::ofstream f("io_test_out/ords.txt");
    f << "14.134725\n\n21.022040\n# comment\n25.010858\n";
  }
  auto ords = io::read_ordinates("io_test_out/ords.txt");
  REQUIRE(ords.size() == 3);

  PrecisionContext ctx = PrecisionContext::make(60);
  auto zeros = pipeline::ingest_zeros(ords, ctx);
  REQUIRE(zeros.size() == 3);
  for (const auto& z : zeros) {
    CHECK(z.residual < ctx.residual_tol());
    CHECK(z.rho.re() == ctx.real(0.5));
  }

  {
    std::ofstream f("io_test_out/bad.txt");
    f << "14.134725\nnot-a-number\n";
  }
  CHECK_THROWS_AS(io::read_ordinates("io_test_out/bad.txt"), io::ParseError);
  try {
    io::read_ordinates("io_test_out/bad.txt");
  } catch (const io::ParseError& e) {
    CHECK(e.line == 2);
  }

  {
    std::ofstream f("io_test_out/empty.txt");
  }
  CHECK(io::read_ordinates("io_test_out/empty.txt").empty());
}

TEST_CASE("zero and point tables round-trip") {
  PrecisionContext ctx = PrecisionContext::make(60);
  auto ords = io::read_ordinates(zeros_path());
  ords.resize(3);
  auto zeros = pipeline::ingest_zeros(ords, ctx);
  fs::create_directories("io_test_out");
  io::write_zero_table(zeros, ctx.digits, "io_test_out/zeros.txt");
  auto back = io::read_zero_table("io_test_out/zeros.txt");
  REQUIRE(back.size() == zeros.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(mp::identical(back[i].rho.im(), zeros[i].rho.im()));
  }

  std::vector<Complex> pts = {zeros[0].rho, zeros[1].rho};
  io::write_point_table(pts, ctx.digits, "io_test_out/pts.txt");
  auto pback = io::read_point_table("io_test_out/pts.txt");
  REQUIRE(pback.size() == 2);
  CHECK(mp::identical(pback[1].im(), pts[1].im()));
}

TEST_CASE("manifest provenance: missing and stale inputs") {
  fs::create_directories("io_test_out");
  {
    std::ofstream f("io_test_out/input.txt");
    f << "payload v1\n";
  }
  io::Manifest producer("digits=60;length=10");
  producer.record_output("io_test_out/input.txt");
  producer.save("io_test_out/manifest.json");

  io::Manifest same("digits=60;length=10");
  CHECK_NOTHROW(same.require_input("io_test_out/input.txt", io::Manifest::load("io_test_out/manifest.json")));

  io::Manifest changed("digits=80;length=10");
  CHECK_THROWS_AS(changed.require_input("io_test_out/input.txt", producer), io::StaleInput);

  CHECK_THROWS_AS(same.require_input("io_test_out/nonexistent.txt", producer), io::MissingInput);

  // content tamper trips the checksum
  {
    std::ofstream f("io_test_out/input.txt");
    f << "payload v2\n";
  }
  CHECK_THROWS_AS(same.require_input("io_test_out/input.txt", producer), io::StaleInput);
}

TEST_CASE("psi pairing matches the printed fixed-point approximations") {
  PrecisionContext ctx = PrecisionContext::make(60);
  auto ords = io::read_ordinates(zeros_path());
  ords.resize(5);
  auto zeros = pipeline::ingest_zeros(ords, ctx);
  auto psi = pipeline::find_psi_table(zeros, 4, ctx);
  const double expect[4][2] = {{-2.3859, 16.271}, {-2.0369, 21.9931}, {-1.6935, 26.5283},
                               {-1.7496, 30.8158}};
  for (int n = 0; n < 4; ++n) {
    CHECK(std::abs(psi[n].re().to_double() - expect[n][0]) < 2e-4);
    CHECK(std::abs(psi[n].im().to_double() - expect[n][1]) < 2e-3);
  }
}

TEST_CASE("stats csv carries the documented columns") {
  PrecisionContext ctx = PrecisionContext::make(80);
  orbit::Branch b = small_branch(ctx);
  auto fit = pipeline::fit_branch(b);
  auto dev = spiralfit::deviations(b, fit.linear, fit.series, 1, true);
  fs::create_directories("io_test_out");
  pipeline::write_stats_csv(fit.series, dev, "io_test_out/stats.csv", {"test"});
  std::ifstream f("io_test_out/stats.csv");
  std::string line;
  std::getline(f, line);  // comment
  std::getline(f, line);
  CHECK(line == "k,theta_k,logr_k,delta_k,d_rel_k,d_abs_k,log_d_rel_k,log_d_abs_k");
  long rows = 0;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == b.length());
}
