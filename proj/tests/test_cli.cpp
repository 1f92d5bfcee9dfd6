#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef LAMBDA_ENGINE_CLI
#define LAMBDA_ENGINE_CLI "lambda-engine"
#endif

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd =
        std::string(LAMBDA_ENGINE_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string run_stdout(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path() / "lambda_engine_cli_out.txt";
    const std::string cmd = std::string(LAMBDA_ENGINE_CLI) + " " + args + " > " +
                            tmp.string() + " 2> /dev/null";
    const int rc = std::system(cmd.c_str());
    (void)rc;  // stdout capture is meaningful for failing commands too
    std::ifstream in(tmp);
    std::ostringstream ss;
    ss << in.rdbuf();
    fs::remove(tmp);
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("exit codes distinguish failure classes") {
    CHECK(run("steady --solver closed") == 0);
    CHECK(run("sweep --config /nonexistent/sweep.cfg") == 2);   // config error
    CHECK(run("figure figure9") == 2);                          // invalid input
    CHECK(run("figure figure2a --solver bogus") == 2);
    // oracle tolerance failure: the closed-form population comparison at
    // omega_rabi = 1 genuinely misses the 5% target (declared deviation)
    CHECK(run("oracle-check --quick") == 4);

    // solver failure: no relaxation channel at all, no steady state
    const fs::path cfg = fs::temp_directory_path() / "lambda_engine_norelax.cfg";
    {
        std::ofstream out(cfg);
        out << "[engine]\ngamma_eg = 0\ngamma_egp = 0\n";
    }
    CHECK(run("steady --solver ode --config " + cfg.string()) == 3);
    fs::remove(cfg);
}

TEST_CASE("config-driven sweep end to end") {
    const fs::path dir = fs::temp_directory_path() / "lambda_engine_cli_sweep";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "sweep.cfg";
    {
        std::ofstream out(cfg);
        out << "[engine]\nkappa = 0.5\n"
            << "[sweep]\nparameter = n_h\nvalues = 0.02, 0.05, 0.1\nsolver = closed\n"
            << "family = eta\nfamily_values = 0.01, 0.5\n"
            << "[output]\ncsv = gain.csv\nsvg = gain.svg\ntitle = demo\n";
    }
    CHECK(run("sweep --config " + cfg.string() + " --out " + dir.string()) == 0);
    const std::string csv = slurp(dir / "gain.csv");
    CHECK(csv.find("curve,solver,") == 0);
    // header + 2 curves x 3 points
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(slurp(dir / "gain.svg").find("<svg ") == 0);
    fs::remove_all(dir);
}

TEST_CASE("thermo subcommand emits the flux row schema") {
    const std::string out = run_stdout("thermo");
    CHECK(out.find("n_h,n_c,eta,omega_rabi,omega_m,kappa,P_c,Qdot_c,Qdot_out,"
                   "Qdot_h,residual,efficiency") == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 2);
}

TEST_CASE("steady writes a one-period trajectory on request") {
    const fs::path tmp = fs::temp_directory_path() / "lambda_engine_orbit.csv";
    fs::remove(tmp);
    CHECK(run("steady --solver closed --trajectory " + tmp.string()) == 0);
    const std::string csv = slurp(tmp);
    CHECK(csv.find("t,re_rho_gg,im_rho_gg,") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 258);  // header + 257 samples
    fs::remove(tmp);
}

TEST_CASE("worker env variable is accepted") {
    const fs::path dir = fs::temp_directory_path() / "lambda_engine_cli_env";
    fs::remove_all(dir);
    fs::create_directories(dir);
    setenv("LAMBDA_ENGINE_WORKERS", "3", 1);
    CHECK(run("figure figure2b --out " + dir.string()) == 0);
    unsetenv("LAMBDA_ENGINE_WORKERS");
    CHECK(fs::exists(dir / "figure2b.csv"));
    fs::remove_all(dir);
}
