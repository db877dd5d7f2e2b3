#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef HAMEIG_CLI_PATH
#error "HAMEIG_CLI_PATH must point at the built executable"
#endif

namespace fs = std::filesystem;

namespace {

struct RunOutcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunOutcome run_cli(const std::string& args) {
    fs::path base = fs::temp_directory_path();
    fs::path out = base / "hameig_cli_stdout.txt";
    fs::path err = base / "hameig_cli_stderr.txt";
    std::string cmd = std::string(HAMEIG_CLI_PATH) + " " + args + " >" +
                      out.string() + " 2>" + err.string();
    int raw = std::system(cmd.c_str());
    RunOutcome r;
    r.code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("list-catalog prints the built-in problems") {
    RunOutcome r = run_cli("list-catalog");
    REQUIRE(r.code == 0);
    for (const char* name : {"example-delay-phi", "eigendir", "gh-split", "const-f"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("check certifies the constant problem") {
    fs::path dir = fresh_dir("hameig_cli_check");
    RunOutcome r = run_cli("check --problem const-f --out " + dir.string() +
                           " --emit json");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("overall: PASS") != std::string::npos);
    CHECK(r.out.find("delta_bar = 0.09375") != std::string::npos);
    CHECK(r.out.find("[PASS] (H2)") != std::string::npos);
    CHECK(r.out.find("[PASS] (H3)") != std::string::npos);

    nlohmann::json j = nlohmann::json::parse(slurp(dir / "check.json"));
    CHECK(j["all_pass"] == true);
    CHECK(j["problem"] == "const-f");
    CHECK(j["delta_bar"].get<double>() == Catch::Approx(3.0 / 32.0).margin(1e-12));
}

TEST_CASE("check rejects a config whose majorant is too small") {
    fs::path dir = fresh_dir("hameig_cli_badmaj");
    fs::path cfg = dir / "bad.cfg";
    write_file(cfg, "schema = 1\n"
                    "name = bad-majorant\n"
                    "f = 1\n"
                    "M = 0.5\n"
                    "delta = 1\n");
    RunOutcome r = run_cli("check --problem " + cfg.string() + " --out " + dir.string());
    REQUIRE(r.code == 2);
    CHECK(r.out.find("overall: FAIL") != std::string::npos);
    CHECK(r.out.find("[FAIL] (H2)") != std::string::npos);
}

TEST_CASE("solve emits the closed-form solution for constant forcing") {
    fs::path dir = fresh_dir("hameig_cli_solve");
    RunOutcome r = run_cli("solve --problem const-f --lambda 1 --grid-n 65 --out " +
                           dir.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("converged = yes") != std::string::npos);
    CHECK(r.out.find("cone: PASS") != std::string::npos);

    // u(1/2) = 1/8 shows up in the csv row at t = 0.5
    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "t,u,u_minus_y");
    bool found = false;
    while (std::getline(csv, line)) {
        if (line.rfind("0.5,", 0) == 0) {
            double u = std::strtod(line.c_str() + 4, nullptr);
            CHECK(u == Catch::Approx(0.125).margin(1e-10));
            found = true;
        }
    }
    CHECK(found);

    nlohmann::json j = nlohmann::json::parse(slurp(dir / "solve.json"));
    CHECK(j["schema"] == 1);
    CHECK(j["converged"] == true);
    CHECK(j["lambda"] == 1.0);
    CHECK(j["grid_n"] == 65);
    CHECK(j["n"].get<double>() == Catch::Approx(0.125).margin(1e-10));
    CHECK(j["cone"]["pass"] == true);
    CHECK(fs::exists(dir / "solution.svg"));
}

TEST_CASE("solve reports divergence with exit code 3") {
    fs::path dir = fresh_dir("hameig_cli_diverge");
    fs::path cfg = dir / "lin.cfg";
    write_file(cfg, "schema = 1\n"
                    "name = linear-growth\n"
                    "f = 10*u\n"
                    "omega = 1\n"
                    "M = 100\n"
                    "delta = 1\n");
    RunOutcome r = run_cli("solve --problem " + cfg.string() + " --lambda 40 --out " +
                           dir.string() + " --emit json");
    REQUIRE(r.code == 3);
    CHECK(r.out.find("converged = no") != std::string::npos);
    CHECK(r.out.find("diverged") != std::string::npos);
}

TEST_CASE("scan locates the constant-forcing eigenpair and writes every artifact") {
    fs::path dir = fresh_dir("hameig_cli_scan");
    RunOutcome r = run_cli("scan --problem const-f --out " + dir.string());
    REQUIRE(r.code == 0);
    auto at = r.out.find("eigenpair: lambda* = ");
    REQUIRE(at != std::string::npos);
    CHECK(std::strtod(r.out.c_str() + at + 21, nullptr) ==
          Catch::Approx(8.0).margin(1e-6));
    CHECK(r.out.find("cone PASS") != std::string::npos);

    for (const char* f : {"scan_cells.csv", "eigenpairs.csv", "u_star_1.csv",
                          "scan.json", "scan.svg", "u_star_1.svg"})
        CHECK(fs::exists(dir / f));

    nlohmann::json j = nlohmann::json::parse(slurp(dir / "scan.json"));
    CHECK(j["schema"] == 1);
    CHECK(j["hypotheses_pass"] == true);
    CHECK(j["resolution_failure"] == false);
    REQUIRE(j["pairs"].size() == 1);
    CHECK(j["pairs"][0]["lambda_star"].get<double>() ==
          Catch::Approx(8.0).margin(1e-6));
    CHECK(j["pairs"][0]["cone"]["pass"] == true);
    CHECK(j["cells"].size() == 16);
}

TEST_CASE("usage problems exit with code 4") {
    CHECK(run_cli("frobnicate").code == 4);                    // unknown subcommand
    CHECK(run_cli("check").code == 4);                         // --problem required
    CHECK(run_cli("check --problem const-f --emit csv,bogus").code == 4);
    CHECK(run_cli("solve --problem const-f").code == 4);       // --lambda required
    CHECK(run_cli("check --problem const-f --rho 0").code == 4);
    CHECK(run_cli("check --problem no-such-thing").code == 4);
    CHECK(run_cli("solve --problem const-f --lambda -1").code == 4);
}

TEST_CASE("--help succeeds") {
    RunOutcome r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("check") != std::string::npos);
    CHECK(r.out.find("scan") != std::string::npos);
}

TEST_CASE("config files supply run keys and explicit flags win") {
    fs::path dir_a = fresh_dir("hameig_cli_cfg_a");
    fs::path dir_b = fresh_dir("hameig_cli_cfg_b");
    fs::path cfg = dir_a / "runnable.cfg";
    write_file(cfg, "schema = 1\n"
                    "name = cfg-const\n"
                    "f = 1\n"
                    "M = 1\n"
                    "delta = 1\n"
                    "lambda = 2\n"
                    "grid_n = 65\n"
                    "emit = json\n"
                    "out = " + dir_a.string() + "\n");

    // run keys come from the file
    RunOutcome a = run_cli("solve --problem " + cfg.string());
    REQUIRE(a.code == 0);
    nlohmann::json ja = nlohmann::json::parse(slurp(dir_a / "solve.json"));
    CHECK(ja["lambda"] == 2.0);
    CHECK(ja["grid_n"] == 65);
    CHECK(ja["problem"] == "cfg-const");
    CHECK_FALSE(fs::exists(dir_a / "solution.csv")); // emit = json only

    // explicit flags override the same keys
    RunOutcome b = run_cli("solve --problem " + cfg.string() + " --lambda 4 --out " +
                           dir_b.string() + " --emit csv");
    REQUIRE(b.code == 0);
    CHECK(fs::exists(dir_b / "solution.csv"));
    CHECK_FALSE(fs::exists(dir_b / "solve.json"));
    std::string csv = slurp(dir_b / "solution.csv");
    // u(1/2) = lambda/8 = 0.5 for the overriding lambda
    auto row = csv.find("\n0.5,");
    REQUIRE(row != std::string::npos);
    char* rest = nullptr;
    double u_mid = std::strtod(csv.c_str() + row + 5, &rest);
    double diff_mid = std::strtod(rest + 1, nullptr);
    CHECK(u_mid == Catch::Approx(0.5).margin(1e-12));
    CHECK(diff_mid == Catch::Approx(0.5).margin(1e-12));
}
