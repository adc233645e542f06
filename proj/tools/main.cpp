// polyshrink: risk queries, table/curve reproduction, simulation and
// verification for polynomial shrinkage estimators under balanced loss.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyshrink/estimators.hpp"
#include "polyshrink/montecarlo.hpp"
#include "polyshrink/reference_tables.hpp"
#include "polyshrink/risk.hpp"
#include "polyshrink/verification.hpp"
#include "polyshrink/version.hpp"

namespace {

namespace fs = std::filesystem;
using polyshrink::estimators::Convention;
using polyshrink::estimators::ShrinkagePolynomial;

// ---------------------------------------------------------------------------
// formatting and file helpers

std::string fmt_sig(double value, int significant = 6) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", significant, value);
    return buffer;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) {
        return value;
    }
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) row += ',';
        row += csv_field(fields[i]);
    }
    row += '\n';
    return row;
}

std::string timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

fs::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("POLYSHRINK_OUTPUT_DIR");
        env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& path, const std::string& command,
                    const KeyValues& entries) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write manifest: " + path.string());
    }
    out << "command = " << command << "\n";
    out << "version = " << polyshrink::kVersion << "\n";
    out << "timestamp = " << timestamp_utc() << "\n";
    for (const auto& [key, value] : entries) {
        out << key << " = " << value << "\n";
    }
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + path.string());
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep = " ") {
    std::string joined;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) joined += sep;
        joined += parts[i];
    }
    return joined;
}

// ---------------------------------------------------------------------------
// estimator selection

struct DegreeSpec {
    int degree;        // 1..4
    std::string label; // js, deg2, deg3, deg4
};

DegreeSpec parse_degree(const std::string& text) {
    if (text == "JS" || text == "js") {
        return {1, "js"};
    }
    if (text == "2" || text == "3" || text == "4") {
        const int degree = text[0] - '0';
        return {degree, "deg" + text};
    }
    throw CLI::ValidationError("--degree", "expected one of JS, 2, 3, 4; got '" +
                                               text + "'");
}

Convention parse_convention(const std::string& text) {
    if (text == "theorem") return Convention::Theorem;
    if (text == "simulation") return Convention::Simulation;
    throw CLI::ValidationError("--convention",
                               "expected theorem or simulation, got '" + text +
                                   "'");
}

struct CellValue {
    double risk;
    double ratio;
    std::optional<double> std_error;
};

struct McParams {
    std::int64_t replications = 100'000;
    std::uint64_t seed = 1;
    int chunk_size = 4096;
};

// Evaluates one grid cell for a set of estimators, either by exact series or
// by one common-random-numbers simulation covering all of them.
std::vector<CellValue> eval_cell(const std::vector<DegreeSpec>& specs, int p,
                                 double omega, double lambda, Convention conv,
                                 bool monte_carlo, const McParams& mc_params,
                                 const polyshrink::ncx2::SeriesControl& ctrl) {
    std::vector<ShrinkagePolynomial> ests;
    ests.reserve(specs.size());
    for (const auto& spec : specs) {
        ests.push_back(polyshrink::estimators::poly(spec.degree, p, omega, conv));
    }
    std::vector<CellValue> values;
    values.reserve(specs.size());
    const double denom = polyshrink::risk::mle_risk(p, omega);
    if (!monte_carlo) {
        for (const auto& est : ests) {
            const auto report =
                polyshrink::risk::exact_risk_general(est, p, lambda, ctrl);
            values.push_back({report.risk, report.ratio_to_mle, std::nullopt});
        }
        return values;
    }
    polyshrink::mc::SimulationPlan plan;
    plan.p = p;
    plan.lambda = lambda;
    plan.omega = omega;
    plan.estimators = std::move(ests);
    plan.replications = mc_params.replications;
    plan.seed = mc_params.seed;
    plan.chunk_size = mc_params.chunk_size;
    for (const auto& estimate : polyshrink::mc::simulate_risk(plan)) {
        values.push_back(
            {estimate.mean, estimate.mean / denom, estimate.std_error});
    }
    return values;
}

// ---------------------------------------------------------------------------
// subcommand options

struct CommonOpts {
    std::string out_dir;
    std::string config_path;
    double rel_tol = 1e-12;
    int max_terms = 10'000;

    polyshrink::ncx2::SeriesControl ctrl() const {
        return {rel_tol, max_terms};
    }
};

struct RiskOpts : CommonOpts {
    int p = 0;
    double omega = 0.0;
    double lambda = 0.0;
    std::string degree = "JS";
    std::string convention = "simulation";
    std::string method = "exact";
    McParams mc;
};

struct TableOpts : CommonOpts {
    int paper_table = 0;  // 0 = custom grid
    int p = 0;
    std::vector<double> lambdas;
    std::vector<double> omegas;
    std::vector<std::string> degrees;
    std::string convention = "simulation";
    std::string method = "exact";
    std::string output;
    McParams mc;
};

struct CurveOpts : CommonOpts {
    int figure = 0;  // 0 = custom
    int p = 0;
    double omega = 0.0;
    std::vector<std::string> degrees;
    double lambda_max = 20.0;
    int steps = 100;
    std::string convention = "simulation";
    std::string output;
};

struct SimulateOpts : CommonOpts {
    int p = 0;
    double omega = 0.0;
    double lambda = 0.0;
    std::vector<std::string> degrees = {"JS"};
    std::string convention = "simulation";
    McParams mc;
};

struct VerifyOpts : CommonOpts {
    bool quick = false;
    std::int64_t replications = 100'000;
    std::uint64_t seed = 0x5eed2024u;
};

const char* kRiskHeader = "p,omega,lambda,degree,convention,method,risk,ratio,stderr";

std::string risk_row(const DegreeSpec& spec, int p, double omega, double lambda,
                     const std::string& convention, const std::string& method,
                     const CellValue& value) {
    return csv_row({std::to_string(p), fmt_sig(omega), fmt_sig(lambda),
                    spec.label == "js" ? "JS" : spec.label.substr(3),
                    convention, method, fmt_sig(value.risk),
                    fmt_sig(value.ratio),
                    value.std_error ? fmt_sig(*value.std_error) : ""});
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_risk(const RiskOpts& opts) {
    const DegreeSpec spec = parse_degree(opts.degree);
    const Convention conv = parse_convention(opts.convention);
    const bool monte_carlo = opts.method == "mc";
    if (!monte_carlo && opts.method != "exact") {
        throw CLI::ValidationError("--method", "expected exact or mc");
    }
    const auto values = eval_cell({spec}, opts.p, opts.omega, opts.lambda, conv,
                                  monte_carlo, opts.mc, opts.ctrl());
    std::cout << kRiskHeader << "\n"
              << risk_row(spec, opts.p, opts.omega, opts.lambda,
                          opts.convention, opts.method, values[0]);
    const fs::path dir = output_dir(opts.out_dir);
    write_manifest(dir / "risk-manifest.txt", "risk",
                   {{"p", std::to_string(opts.p)},
                    {"omega", fmt_sig(opts.omega)},
                    {"lambda", fmt_sig(opts.lambda)},
                    {"degree", opts.degree},
                    {"convention", opts.convention},
                    {"method", opts.method},
                    {"rel_tol", fmt_sig(opts.rel_tol)},
                    {"max_terms", std::to_string(opts.max_terms)},
                    {"replications", std::to_string(opts.mc.replications)},
                    {"seed", std::to_string(opts.mc.seed)},
                    {"chunk_size", std::to_string(opts.mc.chunk_size)}});
    return 0;
}

int cmd_table(const TableOpts& opts) {
    const Convention conv = parse_convention(opts.convention);
    const bool monte_carlo = opts.method == "mc";
    if (!monte_carlo && opts.method != "exact") {
        throw CLI::ValidationError("--method", "expected exact or mc");
    }

    int p = opts.p;
    std::vector<double> lambdas = opts.lambdas;
    std::vector<double> omegas = opts.omegas;
    std::vector<std::string> degree_names = opts.degrees;
    std::string stem = "table_custom";
    if (opts.paper_table != 0) {
        const auto& ref = polyshrink::tables::reference_table(opts.paper_table);
        p = ref.p;
        lambdas.assign(polyshrink::tables::kLambdas.begin(),
                       polyshrink::tables::kLambdas.end());
        omegas.assign(polyshrink::tables::kOmegas.begin(),
                      polyshrink::tables::kOmegas.end());
        degree_names.clear();
        for (int e = 0; e < ref.entries; ++e) {
            const int degree =
                polyshrink::tables::entry_degree(ref.entry_labels[e]);
            degree_names.push_back(degree == 1 ? "JS" : std::to_string(degree));
        }
        stem = "table" + std::to_string(opts.paper_table);
    }
    if (p < 1 || lambdas.empty() || omegas.empty() || degree_names.empty()) {
        throw CLI::ValidationError(
            "table", "need --paper-table or a full custom grid "
                     "(--p, --lambdas, --omegas, --degrees)");
    }

    // Drop estimators below their dimension threshold, keeping the reason.
    std::vector<DegreeSpec> specs;
    std::vector<std::string> skipped;
    for (const auto& name : degree_names) {
        const DegreeSpec spec = parse_degree(name);
        try {
            (void)polyshrink::estimators::poly(spec.degree, p, 0.0, conv);
            specs.push_back(spec);
        } catch (const polyshrink::DimensionTooSmall& e) {
            skipped.push_back(spec.label + ": " + e.what());
        }
    }
    if (specs.empty()) {
        throw CLI::ValidationError("table",
                                   "no estimator in the grid is constructible "
                                   "at p = " + std::to_string(p));
    }
    for (const auto& reason : skipped) {
        std::cerr << "skipped " << reason << "\n";
    }

    const fs::path dir = output_dir(opts.out_dir);
    const fs::path wide_path =
        opts.output.empty() ? dir / (stem + ".csv") : fs::path(opts.output);
    fs::path long_path = wide_path;
    long_path.replace_filename(wide_path.stem().string() + "_long.csv");

    auto wide = open_csv(wide_path);
    auto long_form = open_csv(long_path);
    std::vector<std::string> header = {"lambda", "omega"};
    for (const auto& spec : specs) {
        header.push_back(spec.label);
    }
    wide << csv_row(header);
    long_form << csv_row({"lambda", "omega", "estimator", "ratio", "stderr"});

    McParams mc_params = opts.mc;
    for (std::size_t row = 0; row < lambdas.size(); ++row) {
        for (std::size_t col = 0; col < omegas.size(); ++col) {
            mc_params.seed =
                opts.mc.seed + row * omegas.size() + col;  // per-cell plan
            const auto values =
                eval_cell(specs, p, omegas[col], lambdas[row], conv,
                          monte_carlo, mc_params, opts.ctrl());
            std::vector<std::string> fields = {fmt_sig(lambdas[row]),
                                               fmt_sig(omegas[col])};
            for (std::size_t e = 0; e < specs.size(); ++e) {
                fields.push_back(fmt_sig(values[e].ratio));
                long_form << csv_row(
                    {fmt_sig(lambdas[row]), fmt_sig(omegas[col]),
                     specs[e].label, fmt_sig(values[e].ratio),
                     values[e].std_error ? fmt_sig(*values[e].std_error) : ""});
            }
            wide << csv_row(fields);
        }
    }

    KeyValues manifest = {
        {"paper_table", std::to_string(opts.paper_table)},
        {"p", std::to_string(p)},
        {"lambdas", join([&] {
             std::vector<std::string> parts;
             for (double value : lambdas) parts.push_back(fmt_sig(value));
             return parts;
         }())},
        {"omegas", join([&] {
             std::vector<std::string> parts;
             for (double value : omegas) parts.push_back(fmt_sig(value));
             return parts;
         }())},
        {"degrees", join([&] {
             std::vector<std::string> parts;
             for (const auto& spec : specs) parts.push_back(spec.label);
             return parts;
         }())},
        {"convention", opts.convention},
        {"method", opts.method},
        {"rel_tol", fmt_sig(opts.rel_tol)},
        {"max_terms", std::to_string(opts.max_terms)},
        {"replications", std::to_string(opts.mc.replications)},
        {"base_seed", std::to_string(opts.mc.seed)},
        {"seed_rule", "base_seed + row * n_omegas + col"},
        {"chunk_size", std::to_string(opts.mc.chunk_size)},
        {"output", wide_path.string()},
        {"output_long", long_path.string()},
    };
    for (const auto& reason : skipped) {
        manifest.push_back({"skipped", reason});
    }
    fs::path manifest_path = wide_path;
    manifest_path.replace_filename(wide_path.stem().string() +
                                   ".manifest.txt");
    write_manifest(manifest_path, "table", manifest);
    std::cout << "wrote " << wide_path.string() << ", " << long_path.string()
              << ", " << manifest_path.string() << "\n";
    return 0;
}

int cmd_curve(const CurveOpts& opts) {
    const Convention conv = parse_convention(opts.convention);
    int p = opts.p;
    double omega = opts.omega;
    std::vector<std::string> degree_names = opts.degrees;
    std::string stem = "curve_custom";
    if (opts.figure != 0) {
        // figures 1-4 compare JS vs degree 2; figures 5-8 degree 2 vs 3
        struct Preset {
            int p;
            double omega;
        };
        static constexpr Preset kPresets[8] = {{8, 0.1},  {8, 0.4},  {12, 0.1},
                                               {12, 0.4}, {14, 0.1}, {14, 0.4},
                                               {18, 0.1}, {18, 0.4}};
        if (opts.figure < 1 || opts.figure > 8) {
            throw CLI::ValidationError("--figure", "expected 1..8");
        }
        p = kPresets[opts.figure - 1].p;
        omega = kPresets[opts.figure - 1].omega;
        degree_names = opts.figure <= 4 ? std::vector<std::string>{"JS", "2"}
                                        : std::vector<std::string>{"2", "3"};
        stem = "figure" + std::to_string(opts.figure);
    }
    if (p < 1 || degree_names.empty()) {
        throw CLI::ValidationError("curve",
                                   "need --figure or --p/--omega/--degrees");
    }
    if (opts.steps < 1 || !(opts.lambda_max > 0.0)) {
        throw CLI::ValidationError("curve",
                                   "--steps must be >= 1 and --lambda-max > 0");
    }
    std::vector<DegreeSpec> specs;
    for (const auto& name : degree_names) {
        specs.push_back(parse_degree(name));
        // constructibility check up front so failures are usage errors
        (void)polyshrink::estimators::poly(specs.back().degree, p, omega, conv);
    }

    const fs::path dir = output_dir(opts.out_dir);
    const fs::path path =
        opts.output.empty() ? dir / (stem + ".csv") : fs::path(opts.output);
    auto out = open_csv(path);
    std::vector<std::string> header = {"lambda"};
    for (const auto& spec : specs) {
        header.push_back(spec.label);
    }
    out << csv_row(header);
    const auto ctrl = opts.ctrl();
    for (int i = 0; i <= opts.steps; ++i) {
        const double lambda = opts.lambda_max * i / opts.steps;
        std::vector<std::string> fields = {fmt_sig(lambda)};
        for (const auto& spec : specs) {
            const auto report = polyshrink::risk::exact_risk_general(
                polyshrink::estimators::poly(spec.degree, p, omega, conv), p,
                lambda, ctrl);
            fields.push_back(fmt_sig(report.ratio_to_mle));
        }
        out << csv_row(fields);
    }
    fs::path manifest_path = path;
    manifest_path.replace_filename(path.stem().string() + ".manifest.txt");
    write_manifest(manifest_path, "curve",
                   {{"figure", std::to_string(opts.figure)},
                    {"p", std::to_string(p)},
                    {"omega", fmt_sig(omega)},
                    {"degrees", join([&] {
                         std::vector<std::string> parts;
                         for (const auto& spec : specs)
                             parts.push_back(spec.label);
                         return parts;
                     }())},
                    {"convention", opts.convention},
                    {"lambda_max", fmt_sig(opts.lambda_max)},
                    {"steps", std::to_string(opts.steps)},
                    {"rel_tol", fmt_sig(opts.rel_tol)},
                    {"max_terms", std::to_string(opts.max_terms)},
                    {"output", path.string()}});
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_simulate(const SimulateOpts& opts) {
    const Convention conv = parse_convention(opts.convention);
    std::vector<DegreeSpec> specs;
    for (const auto& name : opts.degrees) {
        specs.push_back(parse_degree(name));
    }
    const auto values = eval_cell(specs, opts.p, opts.omega, opts.lambda, conv,
                                  /*monte_carlo=*/true, opts.mc, opts.ctrl());
    std::cout << kRiskHeader << "\n";
    for (std::size_t e = 0; e < specs.size(); ++e) {
        std::cout << risk_row(specs[e], opts.p, opts.omega, opts.lambda,
                              opts.convention, "mc", values[e]);
    }
    const fs::path dir = output_dir(opts.out_dir);
    write_manifest(dir / "simulate-manifest.txt", "simulate",
                   {{"p", std::to_string(opts.p)},
                    {"omega", fmt_sig(opts.omega)},
                    {"lambda", fmt_sig(opts.lambda)},
                    {"degrees", join([&] {
                         std::vector<std::string> parts;
                         for (const auto& spec : specs)
                             parts.push_back(spec.label);
                         return parts;
                     }())},
                    {"convention", opts.convention},
                    {"replications", std::to_string(opts.mc.replications)},
                    {"seed", std::to_string(opts.mc.seed)},
                    {"chunk_size", std::to_string(opts.mc.chunk_size)}});
    return 0;
}

const char* status_label(polyshrink::verify::Status status) {
    switch (status) {
        case polyshrink::verify::Status::Pass: return "PASS";
        case polyshrink::verify::Status::Fail: return "FAIL";
        case polyshrink::verify::Status::Flagged: return "FLAGGED";
    }
    return "?";
}

int cmd_verify(const VerifyOpts& opts) {
    polyshrink::verify::Options options;
    options.quick = opts.quick;
    options.mc_replications = opts.replications;
    options.mc_seed = opts.seed;
    options.ctrl = opts.ctrl();
    const auto report = polyshrink::verify::run_all(options);

    for (const auto& check : report.checks) {
        std::cout << "[" << status_label(check.status) << "] " << check.name
                  << ": observed " << fmt_sig(check.observed) << ", limit "
                  << fmt_sig(check.limit);
        if (!check.detail.empty()) {
            std::cout << " -- " << check.detail;
        }
        std::cout << "\n";
    }

    std::cout << "\nconvention adjudication (max |ratio error| per table):\n";
    for (int t = 0; t < 4; ++t) {
        const auto& thm = report.adjudication.theorem[t];
        const auto& sim = report.adjudication.simulation[t];
        if (thm.cells == 0 && sim.cells == 0) {
            continue;
        }
        std::cout << "  table " << t + 1 << " (p = " << sim.p
                  << "): theorem " << fmt_sig(thm.max_abs_err)
                  << ", simulation " << fmt_sig(sim.max_abs_err) << "\n";
    }
    std::cout << "  adjudicated: "
              << polyshrink::estimators::to_string(
                     report.adjudication.adjudicated)
              << "\n";
    const auto errata = polyshrink::verify::known_errata();
    std::cout << "\nknown reference-table errata (" << errata.size()
              << " cells):\n";
    for (const auto& erratum : errata) {
        std::cout << "  table " << erratum.table << ", lambda "
                  << fmt_sig(erratum.lambda) << ", omega "
                  << fmt_sig(erratum.omega) << ", " << erratum.entry
                  << " entry printed " << fmt_sig(erratum.printed) << ": "
                  << erratum.note << "\n";
    }
    std::cout << "\n" << (report.failures == 0 ? "all checks passed"
                                               : std::to_string(report.failures) +
                                                     " check(s) failed")
              << "\n";

    const fs::path dir = output_dir(opts.out_dir);
    auto csv = open_csv(dir / "verify_report.csv");
    csv << csv_row({"status", "check", "observed", "limit", "detail"});
    for (const auto& check : report.checks) {
        csv << csv_row({status_label(check.status), check.name,
                        fmt_sig(check.observed), fmt_sig(check.limit),
                        check.detail});
    }
    write_manifest(dir / "verify-manifest.txt", "verify",
                   {{"quick", opts.quick ? "true" : "false"},
                    {"replications", std::to_string(opts.replications)},
                    {"seed", std::to_string(opts.seed)},
                    {"rel_tol", fmt_sig(opts.rel_tol)},
                    {"max_terms", std::to_string(opts.max_terms)},
                    {"report", (dir / "verify_report.csv").string()}});
    return report.failures == 0 ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--output-dir", opts.out_dir,
                    "Directory for outputs and manifests (default: "
                    "POLYSHRINK_OUTPUT_DIR or current directory)");
    cmd->add_option("--rel-tol", opts.rel_tol, "Series relative tolerance");
    cmd->add_option("--max-terms", opts.max_terms, "Series term cap");
    cmd->add_option("--config", opts.config_path,
                    "Flat key=value file supplying defaults for this "
                    "subcommand (flags take precedence)");
}

// Expands `--config FILE` into trailing `--key value...` arguments for every
// key the command line does not already set, so flags always win. Lines are
// `key = value`, '#' starts a comment, list values are whitespace or comma
// separated, and `key = true` turns a flag on.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) {
        return args;
    }
    std::ifstream in(config_path);
    if (!in) {
        throw std::runtime_error("cannot read config file: " + config_path);
    }
    auto given = [&](const std::string& flag) {
        for (const auto& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
                return true;
            }
        }
        return false;
    };
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        auto trim = [](std::string text) {
            const auto first = text.find_first_not_of(" \t\r");
            const auto last = text.find_last_not_of(" \t\r");
            return first == std::string::npos
                       ? std::string{}
                       : text.substr(first, last - first + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config" || given("--" + key)) {
            continue;
        }
        if (value == "true") {
            args.push_back("--" + key);
            continue;
        }
        if (value == "false" || value.empty()) {
            continue;
        }
        args.push_back("--" + key);
        std::string token;
        std::stringstream splitter(value);
        while (splitter >> token) {
            while (!token.empty() && token.back() == ',') {
                token.pop_back();
            }
            if (!token.empty()) {
                args.push_back(token);
            }
        }
    }
    return args;
}

void add_mc(CLI::App* cmd, McParams& mc) {
    cmd->add_option("--replications", mc.replications,
                    "Monte Carlo replications");
    cmd->add_option("--seed", mc.seed, "Monte Carlo seed");
    cmd->add_option("--chunk-size", mc.chunk_size, "Monte Carlo chunk size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial shrinkage estimator risk toolkit"};
    app.require_subcommand(1);

    RiskOpts risk_opts;
    auto* risk_cmd =
        app.add_subcommand("risk", "Exact or simulated risk at one point");
    risk_cmd->add_option("--p", risk_opts.p, "Dimension")->required();
    risk_cmd->add_option("--omega", risk_opts.omega, "Balanced loss weight")
        ->required();
    risk_cmd->add_option("--lambda", risk_opts.lambda, "||theta||^2")
        ->required();
    risk_cmd->add_option("--degree", risk_opts.degree, "JS, 2, 3 or 4");
    risk_cmd->add_option("--convention", risk_opts.convention,
                         "theorem or simulation");
    risk_cmd->add_option("--method", risk_opts.method, "exact or mc");
    add_mc(risk_cmd, risk_opts.mc);
    add_common(risk_cmd, risk_opts);

    TableOpts table_opts;
    auto* table_cmd =
        app.add_subcommand("table", "Risk-ratio grid as wide + long CSV");
    table_cmd->add_option("--paper-table", table_opts.paper_table,
                          "Reproduce bundled reference table 1-4");
    table_cmd->add_option("--p", table_opts.p, "Dimension (custom grid)");
    table_cmd->add_option("--lambdas", table_opts.lambdas,
                          "Custom lambda grid");
    table_cmd->add_option("--omegas", table_opts.omegas, "Custom omega grid");
    table_cmd->add_option("--degrees", table_opts.degrees,
                          "Estimators (JS 2 3 4)");
    table_cmd->add_option("--convention", table_opts.convention,
                          "theorem or simulation");
    table_cmd->add_option("--method", table_opts.method, "exact or mc");
    table_cmd->add_option("--output", table_opts.output, "Wide CSV path");
    add_mc(table_cmd, table_opts.mc);
    add_common(table_cmd, table_opts);

    CurveOpts curve_opts;
    auto* curve_cmd = app.add_subcommand(
        "curve", "Risk ratios sampled on [0, lambda-max] as CSV");
    curve_cmd->add_option("--figure", curve_opts.figure,
                          "Bundled figure preset 1-8");
    curve_cmd->add_option("--p", curve_opts.p, "Dimension (custom curve)");
    curve_cmd->add_option("--omega", curve_opts.omega, "Balanced loss weight");
    curve_cmd->add_option("--degrees", curve_opts.degrees,
                          "Estimators (JS 2 3 4)");
    curve_cmd->add_option("--lambda-max", curve_opts.lambda_max,
                          "Upper end of the lambda range");
    curve_cmd->add_option("--steps", curve_opts.steps,
                          "Number of intervals (rows = steps + 1)");
    curve_cmd->add_option("--convention", curve_opts.convention,
                          "theorem or simulation");
    curve_cmd->add_option("--output", curve_opts.output, "CSV path");
    add_common(curve_cmd, curve_opts);

    SimulateOpts sim_opts;
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Seeded Monte Carlo risk for one grid point");
    sim_cmd->add_option("--p", sim_opts.p, "Dimension")->required();
    sim_cmd->add_option("--omega", sim_opts.omega, "Balanced loss weight")
        ->required();
    sim_cmd->add_option("--lambda", sim_opts.lambda, "||theta||^2")
        ->required();
    sim_cmd->add_option("--degrees", sim_opts.degrees, "Estimators (JS 2 3 4)");
    sim_cmd->add_option("--convention", sim_opts.convention,
                        "theorem or simulation");
    add_mc(sim_cmd, sim_opts.mc);
    add_common(sim_cmd, sim_opts);

    VerifyOpts verify_opts;
    auto* verify_cmd = app.add_subcommand(
        "verify", "Run the invariant and reproduction check suites");
    verify_cmd->add_flag("--quick", verify_opts.quick,
                         "Reduced grids and replication counts");
    verify_cmd->add_option("--replications", verify_opts.replications,
                           "Monte Carlo replications per check");
    verify_cmd->add_option("--seed", verify_opts.seed, "Monte Carlo seed");
    add_common(verify_cmd, verify_opts);

    try {
        const std::vector<std::string> args = expand_config(argc, argv);
        std::vector<const char*> arg_ptrs = {argv[0]};
        for (const auto& arg : args) {
            arg_ptrs.push_back(arg.c_str());
        }
        app.parse(static_cast<int>(arg_ptrs.size()), arg_ptrs.data());
        if (risk_cmd->parsed()) return cmd_risk(risk_opts);
        if (table_cmd->parsed()) return cmd_table(table_opts);
        if (curve_cmd->parsed()) return cmd_curve(curve_opts);
        if (sim_cmd->parsed()) return cmd_simulate(sim_opts);
        if (verify_cmd->parsed()) return cmd_verify(verify_opts);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
