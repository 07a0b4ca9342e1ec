#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "gltlab/csv.hpp"
#include "gltlab/structured.hpp"

#ifndef GLT_LAB_BIN
#error "GLT_LAB_BIN must point at the CLI executable"
#endif

using namespace gltlab;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(GLT_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gltlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli build: toeplitz example round-trips exactly") {
  TempDir dir;
  const std::string out = dir.file("t.csv");
  REQUIRE(run("build --family toeplitz --n 3 --coeffs \"0:2,1:-1,-1:-1\" --out " + out) == 0);
  Matrix M = read_matrix_csv(out);
  Matrix E = toeplitz(3, TrigPolynomial::scalar({{0, 2.0}, {1, -1.0}, {-1, -1.0}}));
  REQUIRE(M.rows() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) REQUIRE(M(i, j) == E(i, j));
}

TEST_CASE("cli build: every family constructs") {
  TempDir dir;
  REQUIRE(run("build --family circulant --col \"2,-1,-1\" --out " + dir.file("c.csv")) == 0);
  REQUIRE(run("build --family omega --omega -1 --col \"0,1\" --out " + dir.file("o.csv")) == 0);
  REQUIRE(run("build --family tau --n 5 --coeffs \"0,1\" --out " + dir.file("tau.csv")) == 0);
  REQUIRE(run("build --family hankel --n 2 --coeffs \"1,2,3\" --out " + dir.file("h.csv")) == 0);
  REQUIRE(run("build --family diag --n 4 --fn x --out " + dir.file("d.csv")) == 0);
  REQUIRE(run("build --family fd4 --n 6 --alpha x --out " + dir.file("f.csv")) == 0);
  REQUIRE(run("build --family fd4-2d --n 3,3 --alpha one --out " + dir.file("f2.csv")) == 0);
  REQUIRE(run("build --family bspline --kind cubic --which mass --n 5 --out " +
              dir.file("bs.csv")) == 0);
  REQUIRE(run("build --family cw-restricted --n 40 --gamma 1 --b 1 --out " +
              dir.file("cw.csv")) == 0);
  REQUIRE(run("build --family cw-full --n 3 --out " + dir.file("cwf.csv")) == 0);
  REQUIRE(read_matrix_csv(dir.file("cwf.csv")).rows() == 8);

  // 2-level toeplitz with ';'-separated entries
  REQUIRE(run("build --family toeplitz --n \"2,2\" --coeffs \"0,0:4;1,0:-1;-1,0:-1\" --out " +
              dir.file("t2.csv")) == 0);
  REQUIRE(read_matrix_csv(dir.file("t2.csv")).rows() == 4);
}

TEST_CASE("cli: usage errors exit 2") {
  REQUIRE(run("build --family toeplitz --n 3 --coeffs \"0:2\" --nope") == 2);
  REQUIRE(run("build --family nosuch --n 3") == 2);
  REQUIRE(run("decay --experiment unknown_id") == 2);
  REQUIRE(run("nosuchcommand") == 2);
}

TEST_CASE("cli mean and karcher: trivial fixed points and failure codes") {
  TempDir dir;
  const std::string a = dir.file("a.csv");
  REQUIRE(run("build --family toeplitz --n 4 --coeffs \"0:3,1:1,-1:1\" --out " + a) == 0);
  const std::string g = dir.file("g.csv");
  REQUIRE(run("mean --a " + a + " --b " + a + " --out " + g) == 0);
  Matrix A = read_matrix_csv(a), G = read_matrix_csv(g);
  REQUIRE((A - G).max_abs() < 1e-10);

  const std::string k = dir.file("k.csv");
  REQUIRE(run("karcher --inputs " + a + "," + a + " --out " + k) == 0);
  REQUIRE((A - read_matrix_csv(k)).max_abs() < 1e-10);

  // non-HPD input: numerical failure, exit 3
  const std::string bad = dir.file("bad.csv");
  {
    std::ofstream os(bad);
    os << "1,0,0,0\n0,0,-1,0\n";
  }
  REQUIRE(run("mean --a " + bad + " --b " + bad + " --out " + dir.file("x.csv")) == 3);
  // non-convergence: forced by max-iter 1 on distinct inputs
  const std::string b2 = dir.file("b2.csv");
  REQUIRE(run("build --family toeplitz --n 4 --coeffs \"0:5,1:-2,-1:-2\" --out " + b2) == 0);
  REQUIRE(run("karcher --inputs " + a + "," + b2 + " --max-iter 1 --tol 1e-14 --out " +
              dir.file("k2.csv")) == 3);
}

TEST_CASE("cli spectrum: summary and overlay against a named symbol") {
  TempDir dir;
  const std::string m = dir.file("cw.csv");
  REQUIRE(run("build --family cw-restricted --n 40 --out " + m) == 0);
  const std::string out = dir.file("rep.csv"), ov = dir.file("ov.csv");
  REQUIRE(run("spectrum --matrix " + m + " --symbol cw --gamma 1 --b 1 --out " + out +
              " --overlay " + ov) == 0);
  std::ifstream is(out);
  std::string header, row;
  REQUIRE(std::getline(is, header));
  REQUIRE(header == "n,lambda_min,lambda_max,sup_dist,l1_dist,frac_below");
  REQUIRE(std::getline(is, row));
  REQUIRE(row.rfind("40,", 0) == 0);
  std::ifstream iov(ov);
  REQUIRE(std::getline(iov, header));
  REQUIRE(header == "eigenvalue,quantile");
}

TEST_CASE("cli decay: writes the alpha table") {
  TempDir dir;
  const std::string out = dir.file("decay.csv");
  REQUIRE(run("decay --experiment gm2_ex1 --sizes 20,40 --out " + out) == 0);
  std::ifstream is(out);
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line == "n,lambda,tau,alpha,flagged");
  REQUIRE(std::getline(is, line));
  REQUIRE(line.rfind("20,", 0) == 0);
  REQUIRE(run("decay --experiment gm2_ex1 --sizes 20 --out " + dir.file("d1.csv")) == 2);
}

TEST_CASE("cli spectrum: grid-symbol CSV file as the reference") {
  TempDir dir;
  REQUIRE(run("experiment --id gm2_ex1 --sizes 10,20 --outdir " + dir.file("e")) == 0);
  const std::string m = dir.file("m.csv");
  REQUIRE(run("build --family toeplitz --n 20 --coeffs \"0:3,1:1,-1:1\" --out " + m) == 0);
  REQUIRE(run("spectrum --matrix " + m + " --symbol " + dir.file("e") + "/gm2_ex1_symbol.csv" +
              " --out " + dir.file("rep.csv")) == 0);
  std::ifstream is(dir.file("rep.csv"));
  std::string header, row;
  REQUIRE(std::getline(is, header));
  REQUIRE(std::getline(is, row));
  REQUIRE(row.rfind("20,", 0) == 0);
}

TEST_CASE("cli build: 2D sampling vocabulary and complex omega") {
  TempDir dir;
  REQUIRE(run("build --family diag --n 3,3 --fn x^2+y^2 --out " + dir.file("d2.csv")) == 0);
  Matrix D = read_matrix_csv(dir.file("d2.csv"));
  REQUIRE(D.rows() == 9);
  // lexicographic nodes: first block is (1/3, 1/3)
  REQUIRE(std::abs(D(0, 0).real() - 2.0 / 9.0) < 1e-15);

  REQUIRE(run("build --family omega --omega 0:1 --col \"1,2,0,1\" --out " + dir.file("om.csv")) ==
          0);
  Matrix Om = read_matrix_csv(dir.file("om.csv"));
  REQUIRE(Om(0, 1) == cdouble(0.0, 1.0));  // omega * a_{(0-1) mod 4} = i * 1
}

TEST_CASE("cli experiment: config file with flag overrides") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json");
  {
    std::ofstream os(cfg);
    os << R"({"id": "gm2_ex1", "sizes": "10,20", "outdir": ")" << dir.file("outA") << R"("})";
  }
  REQUIRE(run("experiment --config " + cfg) == 0);
  REQUIRE(fs::exists(dir.file("outA") + "/gm2_ex1_summary.csv"));

  // flag overrides the config outdir
  REQUIRE(run("experiment --config " + cfg + " --outdir " + dir.file("outB")) == 0);
  REQUIRE(fs::exists(dir.file("outB") + "/gm2_ex1_summary.csv"));
  REQUIRE(run("experiment --id gm2_ex1") == 2);  // no outdir anywhere
}

TEST_CASE("cli cw: writes summary, decay tables and full sweep") {
  TempDir dir;
  const std::string out = dir.file("cwdir");
  REQUIRE(run("cw --gamma 1 --b 1 --sizes 40,80 --full-sweep --full-n-min 4 "
              "--full-n-max 6 --outdir " + out + " --log base10") == 0);
  for (const char* f : {"cw_summary.csv", "cw_decay_min.csv", "cw_decay_max.csv",
                        "cw_overlay_40.csv", "cw_full_sweep.csv"})
    REQUIRE(fs::exists(out + "/" + std::string(f)));
}
