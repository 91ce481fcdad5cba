#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::path("cli_test_tmp");
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(PTSYM_CLI_PATH) + " " + args + " > " + out.string() + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

fs::path write_fixture(const std::string& name, const std::string& content) {
  const fs::path dir = fs::path("cli_test_tmp");
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p);
  f << content;
  return p;
}

const char* kMs2 = R"({"n": 2, "entries": [[1,1],[2,0],[2,0],[1,-1]]})";
const char* kMs05 = R"({"n": 2, "entries": [[1,1],[0.5,0],[0.5,0],[1,-1]]})";
const char* kDiag1pi2 = R"({"n": 2, "entries": [[1,1],[0,0],[0,0],[2,0]]})";
const char* kSigma1 = R"({"n": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]})";

}  // namespace

TEST_CASE("classify reports the real-complete class of the s=2 family member") {
  const auto m = write_fixture("m_s2.json", kMs2);
  const auto r = run_cli("classify --matrix " + m.string());
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "classify");
  CHECK(j["payload"]["class"] == "RealComplete");
  const auto eigs = j["payload"]["eigenvalues"];
  REQUIRE(eigs.size() == 2);
  CHECK(std::abs(eigs[0]["value"][0].get<double>() - (-0.7320508075688772)) < 1e-9);
  CHECK(std::abs(eigs[1]["value"][0].get<double>() - 2.7320508075688772) < 1e-9);
  CHECK(j["payload"]["secular_max_imag"].get<double>() < 1e-12);
}

TEST_CASE("classify output is byte-identical across runs") {
  const auto m = write_fixture("m_s2b.json", kMs2);
  const auto r1 = run_cli("classify --matrix " + m.string());
  const auto r2 = run_cli("classify --matrix " + m.string());
  CHECK(r1.out == r2.out);
  CHECK(!r1.out.empty());
}

TEST_CASE("find-pt: present on the family, absent on diag(1+i,2)") {
  const auto m = write_fixture("m_s2c.json", kMs2);
  auto r = run_cli("find-pt --matrix " + m.string());
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["symmetry"] == "involutive");
  CHECK(j["payload"]["involution_defect"].get<double>() < 1e-10);

  const auto bad = write_fixture("diag_1pi_2.json", kDiag1pi2);
  r = run_cli("find-pt --matrix " + bad.string());
  CHECK(r.exit_code == 1);
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["symmetry"] == "absent");
  CHECK(j["pass"] == false);
}

TEST_CASE("build-v and disguise") {
  const auto m = write_fixture("m_s2d.json", kMs2);
  auto r = run_cli("build-v --matrix " + m.string());
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["residual"].get<double>() < 1e-10);

  r = run_cli("disguise --matrix " + m.string());
  REQUIRE(r.exit_code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["hermitian_in_disguise"] == true);
  CHECK(j["payload"]["hermiticity_defect"].get<double>() < 1e-10);

  const auto m5 = write_fixture("m_s05.json", kMs05);
  r = run_cli("disguise --matrix " + m5.string());
  CHECK(r.exit_code == 1);  // complex pair: not Hermitian in disguise
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["hermitian_in_disguise"] == false);

  const auto bad = write_fixture("diag_1pi_2b.json", kDiag1pi2);
  r = run_cli("build-v --matrix " + bad.string());
  CHECK(r.exit_code == 2);  // precondition: no antilinear symmetry
}

TEST_CASE("two-point: reality passes on the family, fails on diag(1+i,2)") {
  const auto m = write_fixture("m_s2e.json", kMs2);
  const auto phi = write_fixture("sigma1.json", kSigma1);
  auto r = run_cli("two-point --matrix " + m.string() + " --phi " + phi.string());
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["reality"] == true);
  CHECK(j["payload"]["max_imag"].get<double>() <= 1e-9);

  const auto bad = write_fixture("diag_1pi_2c.json", kDiag1pi2);
  r = run_cli("two-point --matrix " + bad.string() + " --phi " + phi.string());
  CHECK(r.exit_code == 1);
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["reality"] == false);
  CHECK(std::abs(j["payload"]["witness"]["energy"][0].get<double>() - 1.0) < 1e-8);
  CHECK(std::abs(j["payload"]["witness"]["energy"][1].get<double>() - 1.0) < 1e-8);
}

TEST_CASE("wedge reproduces the north-south / east-west damping pattern") {
  const auto r = run_cli(
      "wedge --omega1 1 --omega2 2 --eps 0.01 --theta-z 1.5707963267948966 --theta-zdot 0");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["z_term"] == "damped");
  CHECK(j["payload"]["zdot_term"] == "damped");
  CHECK(j["payload"]["both_damped"] == true);

  const auto r2 = run_cli("wedge --omega1 1 --omega2 2 --eps 0.01 --theta-z 0 --theta-zdot 0");
  const auto j2 = nlohmann::json::parse(r2.out);
  CHECK(j2["payload"]["z_term"] == "divergent");
  CHECK(j2["payload"]["zdot_term"] == "damped");
}

TEST_CASE("pu-energy and pu-correlator emit reports and CSV") {
  const fs::path csv = fs::path("cli_test_tmp") / "energy.csv";
  auto r = run_cli("pu-energy --omega1 1 --omega2 2 --gamma 1 --n-sites 400 --delta-tau 0.05 --csv " +
                   csv.string());
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["payload"]["E0"].get<double>() - 1.5) < 0.1);
  const auto csv_text = slurp(csv);
  CHECK(csv_text.rfind("T,F,E0_estimate", 0) == 0);

  const fs::path ccsv = fs::path("cli_test_tmp") / "corr.csv";
  r = run_cli(
      "pu-correlator --omega1 1 --omega2 2 --gamma 1 --n-sites 600 --delta-tau 0.02 "
      "--tau-max 3 --tau-step 0.25 --csv " +
      ccsv.string());
  REQUIRE(r.exit_code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["decays"] == true);
  CHECK(slurp(ccsv).rfind("tau,value", 0) == 0);

  // sweep mode with the six-column CSV
  const fs::path scsv = fs::path("cli_test_tmp") / "sweep.csv";
  r = run_cli("pu-energy --omega1 1 --omega2 0.9 --gamma 1 --n-sites 60 --delta-tau 0.1 "
              "--omega2-max 1.1 --omega2-step 0.01 --csv " +
              scsv.string());
  REQUIRE(r.exit_code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["mode"] == "sweep");
  CHECK(j["payload"]["all_positive"] == true);
  CHECK(slurp(scsv).rfind("omega1,omega2,N,delta_tau,logdet,E0_estimate", 0) == 0);
}

TEST_CASE("algebra-check passes") {
  const auto r = run_cli("algebra-check");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& c : j["payload"]["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("exit codes: unknown command and malformed input") {
  CHECK(run_cli("no-such-command").exit_code == 2);
  const auto bad = write_fixture("bad.json", "{\"n\": 2, \"entries\": [[1,0]]}");
  CHECK(run_cli("classify --matrix " + bad.string()).exit_code == 2);
  CHECK(run_cli("classify --matrix cli_test_tmp/missing.json").exit_code == 2);
  // Jordan input to two-point: validation error
  const auto m1 = write_fixture("m_s1.json", R"({"n": 2, "entries": [[1,1],[1,0],[1,0],[1,-1]]})");
  const auto phi = write_fixture("sigma1b.json", kSigma1);
  CHECK(run_cli("two-point --matrix " + m1.string() + " --phi " + phi.string()).exit_code == 2);

  // numerical failure: eigenbasis condition number beyond 1/tol
  // S diag(1,2) S^{-1} with S = [[1,1],[1,1+1e-10]]: spectrum {1,2}, cond ~ 4e10
  const auto ill = write_fixture(
      "ill.json",
      R"({"n": 2, "entries": [[-9999999999,0],[10000000000,0],[-10000000001,0],[10000000002,0]]})");
  CHECK(run_cli("two-point --matrix " + ill.string() + " --phi " + phi.string()).exit_code == 3);
}
