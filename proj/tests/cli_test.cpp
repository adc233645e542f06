#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef POLYSHRINK_CLI
#error "POLYSHRINK_CLI must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;  // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
    const std::string command = "cd '" + workdir.string() + "' && '" +
                                std::string(POLYSHRINK_CLI) + "' " + args +
                                " 2>&1";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        result.out.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("polyshrink_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

double field_as_double(const std::string& text) { return std::stod(text); }

}  // namespace

TEST_CASE("risk: exact query is correct and byte-deterministic") {
    const auto dir = fresh_dir("risk");
    const std::string args =
        "risk --p 14 --omega 0.1 --lambda 1.2418 --degree JS --method exact";
    const auto first = run_cli(args, dir);
    CHECK(first.exit_code == 0);
    CHECK(first.out.find("p,omega,lambda,degree,convention,method,risk,ratio,"
                         "stderr") != std::string::npos);
    // published value 0.2920
    CHECK(first.out.find("0.292031") != std::string::npos);
    const auto second = run_cli(args, dir);
    CHECK(second.out == first.out);
    CHECK(fs::exists(dir / "risk-manifest.txt"));
}

TEST_CASE("risk: central closed form at p = 8") {
    const auto dir = fresh_dir("risk_central");
    const auto result =
        run_cli("risk --p 8 --omega 0 --lambda 0 --degree JS", dir);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find(",2,0.25,") != std::string::npos);
}

TEST_CASE("risk: precondition violations exit 2 with a named threshold") {
    const auto dir = fresh_dir("risk_bad");
    const auto result =
        run_cli("risk --p 8 --omega 0 --lambda 1 --degree 3", dir);
    CHECK(result.exit_code == 2);
    CHECK(result.out.find("degree 3 requires p > 10") != std::string::npos);

    CHECK(run_cli("risk --p 8 --omega 0", dir).exit_code == 2);  // missing flag
    CHECK(run_cli("nonsense", dir).exit_code == 2);
}

TEST_CASE("table: bundled table 1 reproduces within tolerance") {
    const auto dir = fresh_dir("table1");
    const auto result = run_cli("table --paper-table 1", dir);
    CHECK(result.exit_code == 0);
    const auto rows = parse_csv(dir / "table1.csv");
    REQUIRE(rows.size() == 31);  // header + 5 lambdas x 6 omegas
    CHECK(rows[0] == std::vector<std::string>{"lambda", "omega", "js", "deg2",
                                              "deg3"});
    // first row: lambda = 1.2418, omega = 0, published (0.2134, 0.2010, 0.1973)
    CHECK(std::abs(field_as_double(rows[1][2]) - 0.2134) < 2e-3);
    CHECK(std::abs(field_as_double(rows[1][3]) - 0.2010) < 2e-3);
    CHECK(std::abs(field_as_double(rows[1][4]) - 0.1973) < 2e-3);
    CHECK(fs::exists(dir / "table1_long.csv"));
    CHECK(fs::exists(dir / "table1.manifest.txt"));

    const auto long_rows = parse_csv(dir / "table1_long.csv");
    CHECK(long_rows.size() == 91);  // header + 30 cells x 3 estimators
    CHECK(long_rows[0] == std::vector<std::string>{"lambda", "omega",
                                                   "estimator", "ratio",
                                                   "stderr"});
}

TEST_CASE("table: bundled table 3 last row") {
    const auto dir = fresh_dir("table3");
    CHECK(run_cli("table --paper-table 3", dir).exit_code == 0);
    const auto rows = parse_csv(dir / "table3.csv");
    // row lambda = 20, omega = 0.2, published (0.6464, 0.6463)
    bool found = false;
    for (const auto& row : rows) {
        if (row[0] == "20" && row[1] == "0.2") {
            CHECK(std::abs(field_as_double(row[2]) - 0.6464) < 2e-3);
            CHECK(std::abs(field_as_double(row[3]) - 0.6463) < 2e-3);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("table: custom single-cell grid and skipped estimators") {
    const auto dir = fresh_dir("table_custom");
    const auto result = run_cli(
        "table --p 8 --lambdas 2.5 --omegas 0.1 --degrees JS 4 --output "
        "cell.csv",
        dir);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("degree 4 requires p > 14") != std::string::npos);
    const auto rows = parse_csv(dir / "cell.csv");
    REQUIRE(rows.size() == 2);  // header + single data row, deg4 skipped
    CHECK(rows[0] == std::vector<std::string>{"lambda", "omega", "js"});

    std::ifstream manifest(dir / "cell.manifest.txt");
    std::stringstream contents;
    contents << manifest.rdbuf();
    CHECK(contents.str().find("skipped = deg4") != std::string::npos);
}

TEST_CASE("table: config file supplies the grid, flags take precedence") {
    const auto dir = fresh_dir("table_config");
    {
        std::ofstream config(dir / "grid.conf");
        config << "p = 14\n"
               << "lambdas = 1.2418\n"
               << "omegas = 0.0\n"
               << "degrees = JS\n"
               << "output = from_config.csv\n";
    }
    CHECK(run_cli("table --config grid.conf", dir).exit_code == 0);
    const auto rows = parse_csv(dir / "from_config.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(field_as_double(rows[1][2]) - 0.2134) < 2e-3);

    // a flag overrides the config value for the output path
    CHECK(run_cli("table --config grid.conf --output flag_wins.csv", dir)
              .exit_code == 0);
    CHECK(fs::exists(dir / "flag_wins.csv"));
}

TEST_CASE("table: unwritable output path exits 2") {
    const auto dir = fresh_dir("table_unwritable");
    const auto result = run_cli(
        "table --paper-table 1 --output /nonexistent_dir/t.csv", dir);
    CHECK(result.exit_code == 2);
}

TEST_CASE("curve: figure presets honor the domination ordering") {
    const auto dir = fresh_dir("curves");
    CHECK(run_cli("curve --figure 1 --steps 40", dir).exit_code == 0);
    auto rows = parse_csv(dir / "figure1.csv");
    REQUIRE(rows.size() == 42);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "js", "deg2"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double js = field_as_double(rows[i][1]);
        const double deg2 = field_as_double(rows[i][2]);
        CHECK(js < 1.0);
        CHECK(deg2 < 1.0);
        CHECK(deg2 <= js + 1e-12);
    }

    CHECK(run_cli("curve --figure 5 --steps 40", dir).exit_code == 0);
    rows = parse_csv(dir / "figure5.csv");
    CHECK(rows[0] == std::vector<std::string>{"lambda", "deg2", "deg3"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(field_as_double(rows[i][2]) <=
              field_as_double(rows[i][1]) + 1e-12);
    }
}

TEST_CASE("curve: steps = 1 emits exactly the endpoints") {
    const auto dir = fresh_dir("curve_steps");
    CHECK(run_cli("curve --p 14 --omega 0.1 --degrees JS --steps 1 "
                  "--lambda-max 8 --output two.csv",
                  dir)
              .exit_code == 0);
    const auto rows = parse_csv(dir / "two.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "0");
    CHECK(rows[2][0] == "8");
}

TEST_CASE("simulate: one row per estimator with stderr populated") {
    const auto dir = fresh_dir("simulate");
    const std::string args =
        "simulate --p 14 --omega 0.1 --lambda 2 --degrees JS 2 "
        "--replications 20000 --seed 42";
    const auto result = run_cli(args, dir);
    CHECK(result.exit_code == 0);
    std::stringstream ss(result.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].find(",mc,") != std::string::npos);
    CHECK(lines[1].back() != ',');  // stderr field is non-empty
    CHECK(run_cli(args, dir).out == result.out);  // deterministic
}

TEST_CASE("verify --quick exits 0 on a correct build") {
    const auto dir = fresh_dir("verify");
    const auto result = run_cli("verify --quick", dir);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("adjudicated: simulation") != std::string::npos);
    CHECK(result.out.find("all checks passed") != std::string::npos);
    CHECK(result.out.find("[FAIL]") == std::string::npos);
    CHECK(fs::exists(dir / "verify_report.csv"));
    CHECK(fs::exists(dir / "verify-manifest.txt"));
}

TEST_CASE("output directory env var is honored") {
    const auto dir = fresh_dir("envdir");
    const auto out = fresh_dir("envdir_out");
    const std::string args = "risk --p 14 --omega 0 --lambda 1 --degree JS";
    const std::string command = "cd '" + dir.string() +
                                "' && POLYSHRINK_OUTPUT_DIR='" + out.string() +
                                "' '" + std::string(POLYSHRINK_CLI) + "' " +
                                args + " > /dev/null 2>&1";
    REQUIRE(std::system(command.c_str()) == 0);
    CHECK(fs::exists(out / "risk-manifest.txt"));
    CHECK_FALSE(fs::exists(dir / "risk-manifest.txt"));
}
