#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "nifront/analysis.hpp"
#include "nifront/errors.hpp"
#include "nifront/sim.hpp"

namespace nifront::cli {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Output tables

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format6(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Rounds to the printed precision so JSON and CSV carry the same digits.
json json_number(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::stod(format6(v));
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format6(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return v;
            }
        },
        c);
}

json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return json_number(v);
            } else {
                return v;
            }
        },
        c);
}

std::string render_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? "," : "") + t.columns[i];
    }
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            s += (i ? "," : "") + csv_cell(row[i]);
        }
        s += '\n';
    }
    return s;
}

json table_json(const Table& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[t.columns[i]] = json_cell(row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

Scale parse_scale(const std::string& s) {
    if (s == "rd") return Scale::RiskDifference;
    if (s == "rr") return Scale::LogRiskRatio;
    if (s == "as") return Scale::ArcsineDifference;
    fail(ErrorKind::InvalidArgument, "unknown scale '" + s + "'");
}

Shape parse_shape(const std::string& s) {
    if (s == "fixed-rd") return Shape::FixedRiskDifference;
    if (s == "fixed-rr") return Shape::FixedRiskRatio;
    if (s == "power-stabilising") return Shape::PowerStabilising;
    fail(ErrorKind::InvalidArgument, "unknown frontier shape '" + s + "'");
}

ProcedureTag parse_procedure(const std::string& s) {
    if (s == "none") return ProcedureTag::DoNotModify;
    if (s == "large") return ProcedureTag::ModifyLarge;
    if (s == "medium") return ProcedureTag::ModifyMedium;
    if (s == "small") return ProcedureTag::ModifySmall;
    fail(ErrorKind::InvalidArgument, "unknown procedure '" + s + "'");
}

double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        fail(ErrorKind::InvalidArgument, "cannot read " + what + " from '" + s + "'");
    }
    return v;
}

std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty()) {
        return default_grid();
    }
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) {
        parts.push_back(p);
    }
    if (parts.size() != 3) {
        fail(ErrorKind::InvalidArgument, "grid must be start:stop:step, got '" + spec + "'");
    }
    return make_grid(parse_number(parts[0], "grid start"), parse_number(parts[1], "grid stop"),
                     parse_number(parts[2], "grid step"));
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, "'" + path + "' is not valid JSON: " + e.what());
    }
}

AlphaStrategy lookup_from_json(const json& j) {
    std::vector<AlphaStrategy::Breakpoint> rows;
    try {
        for (const json& row : j.at("breakpoints")) {
            rows.push_back({row.at("from").get<double>(), row.at("alpha").get<double>()});
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("lookup table must be {\"breakpoints\": [{\"from\", \"alpha\"}, ...]}: ") +
                                             e.what());
    }
    return AlphaStrategy::lookup(std::move(rows));
}

json lookup_to_json(const AlphaStrategy& s) {
    json rows = json::array();
    for (const auto& b : s.table()) {
        rows.push_back({{"from", b.from}, {"alpha", b.alpha}});
    }
    return {{"breakpoints", rows}};
}

// nominal | fixed:<a> | lookup:<file>
AlphaStrategy parse_alpha_strategy(const std::string& s, double nominal) {
    if (s == "nominal") {
        return AlphaStrategy::nominal(nominal);
    }
    if (s.rfind("fixed:", 0) == 0) {
        return AlphaStrategy::reduced_fixed(parse_number(s.substr(6), "fixed alpha"));
    }
    if (s.rfind("lookup:", 0) == 0) {
        return lookup_from_json(read_json_file(s.substr(7)));
    }
    fail(ErrorKind::InvalidArgument, "alpha strategy must be nominal, fixed:<a> or lookup:<file>");
}

ScenarioSpec load_scenario(const std::string& ref, Scale scale) {
    const auto& names = scenario_preset_names();
    if (std::find(names.begin(), names.end(), ref) != names.end()) {
        return scenario_preset(ref, scale);
    }
    const json j = read_json_file(ref);
    ScenarioSpec s;
    s.scale = scale;
    try {
        s.name = j.value("name", ref);
        const double pi_e0 = j.at("pi_e0").get<double>();
        s.design.pi_e0 = Risk(pi_e0);
        s.design.pi_e1 = Risk(j.value("pi_e1", pi_e0));
        s.design.pi_f1 = Risk(j.at("pi_f1").get<double>());
        s.design.ratio = j.value("ratio", 1.0);
        s.design.alpha = j.value("alpha", 0.025);
        s.design.power = j.value("power", 0.9);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, "scenario file '" + ref + "': " + e.what());
    }
    s.design.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Subcommand settings. Each field is bound to a flag; together with the
// global options they form the replayable run configuration.

struct Global {
    std::string format = "csv";
    std::string out_path;
    std::string write_config;
};

struct DesignArgs {
    std::string scale = "rd";
    double pi_e0 = 0.05;
    std::optional<double> pi_e1;
    double pi_f1 = 0.10;
    double alpha = 0.025;
    double power = 0.90;
    double ratio = 1.0;
    std::optional<double> inflate_alpha;

    DesignSpec spec() const {
        DesignSpec d;
        d.pi_e0 = Risk(pi_e0);
        d.pi_e1 = Risk(pi_e1.value_or(pi_e0));
        d.pi_f1 = Risk(pi_f1);
        d.alpha = alpha;
        d.power = power;
        d.ratio = ratio;
        d.validate();
        return d;
    }
};

struct AnalyzeArgs {
    DesignArgs design;
    std::int64_t n0 = 0;
    std::int64_t e0 = 0;
    std::int64_t n1 = 0;
    std::int64_t e1 = 0;
    std::string method = "conditional";
    std::optional<double> epsilon;
    std::string alpha_strategy = "nominal";
};

struct FrontierArgs {
    std::string shape = "power-stabilising";
    double pi_e0 = 0.05;
    double pi_f1 = 0.10;
    std::string grid;
};

struct SimArgs {
    std::string scenario = "base";
    std::string scale = "rd";
    std::string procedure = "small";
    std::string hypothesis = "null";
    std::string alpha_strategy = "nominal";
    std::int64_t reps = 100000;
    std::uint64_t seed = 0;
    std::string grid;
    int threads = 0;
    bool serial = false;
    std::vector<double> alphas{0.01, 0.015, 0.02, 0.025};
    double slack = 0.0;
    std::string lookup_out;

    GridOptions options() const {
        GridOptions o;
        o.execution = serial ? Execution::Serial : Execution::Parallel;
        o.threads = threads;
        return o;
    }
};

void add_design_flags(CLI::App* cmd, DesignArgs& a) {
    cmd->add_option("--pi-e0", a.pi_e0, "Expected control risk")->capture_default_str();
    cmd->add_option("--pi-e1", a.pi_e1, "Expected active risk (default: --pi-e0)");
    cmd->add_option("--pi-f1", a.pi_f1, "Tolerable active risk at --pi-e0")->capture_default_str();
    cmd->add_option("--alpha", a.alpha, "One-sided significance level")->capture_default_str();
    cmd->add_option("--power", a.power, "Target power")->capture_default_str();
    cmd->add_option("--ratio", a.ratio, "Allocation ratio n1/n0")->capture_default_str();
}

// ---------------------------------------------------------------------------
// Commands

std::string emit(const Table& t, const Global& g) { return g.format == "json" ? table_json(t).dump(2) + "\n" : render_csv(t); }

std::string emit_record(const Table& t, const Global& g) {
    return g.format == "json" ? table_json(t).at(0).dump(2) + "\n" : render_csv(t);
}

std::string cmd_design(const DesignArgs& a, const Global& g) {
    const DesignSpec d = a.spec();
    const Scale scale = parse_scale(a.scale);
    Table t{{"scale", "alpha", "margin", "n0", "n1", "total"}, {}};
    auto add = [&](double alpha, const SampleSize& n) {
        t.rows.push_back({std::string(to_string(scale)), alpha, design_margin(d, scale), n.n0, n.n1, n.total});
    };
    add(d.alpha, sample_size(d, scale));
    if (a.inflate_alpha) {
        add(*a.inflate_alpha, inflated_design(d, scale, *a.inflate_alpha));
    }
    if (g.format == "json") {
        json j = table_json(t).at(0);
        if (a.inflate_alpha) {
            j["inflated"] = table_json(t).at(1);
        }
        return j.dump(2) + "\n";
    }
    return render_csv(t);
}

std::string cmd_analyze(const AnalyzeArgs& a, const Global& g) {
    const DesignSpec d = a.design.spec();
    const Frontier f = d.frontier();
    const TrialData data(a.n0, a.n1, a.e0, a.e1);
    const Scale scale = parse_scale(a.design.scale);

    AnalysisReport r;
    if (a.method == "as") {
        r = analyze_arcsine(data, f, d.alpha);
    } else if (a.method == "backcalc-margin") {
        r = backcalc_margin_rd(data, f, d.alpha);
    } else if (a.method == "backcalc-alpha") {
        r = backcalc_alpha_rd(data, f, d.alpha);
    } else if (a.method == "standard") {
        r = analyze_standard(data, f, scale, d.alpha);
    } else if (a.method == "conditional") {
        const double eps = a.epsilon.value_or(default_epsilon(scale));
        r = conditional_modify_margin(data, d, scale, eps, parse_alpha_strategy(a.alpha_strategy, d.alpha));
    } else {
        fail(ErrorKind::InvalidArgument, "unknown method '" + a.method + "'");
    }

    const bool ratio = r.scale_reported == Scale::LogRiskRatio;
    Table t{{"method", "scale", "estimate", "se", "margin", "alpha_used", "ci_level", "ci_low", "ci_high", "z", "p",
             "margin_modified", "non_inferior"},
            {}};
    t.rows.push_back({std::string(to_string(r.method)), std::string(to_string(r.scale_reported)),
                      ratio ? std::exp(r.estimate) : r.estimate, r.se, reported_margin(r), r.alpha_used, r.ci_level,
                      r.ci_low, r.ci_high, r.z, r.p, r.margin_modified, r.non_inferior});
    return emit_record(t, g);
}

std::string cmd_frontier(const FrontierArgs& a, const Global& g) {
    const Frontier f(parse_shape(a.shape), Risk(a.pi_e0), Risk(a.pi_f1));
    Table t{{"pi0", "pi_f1_star", "margin_rd", "margin_logrr", "margin_as"}, {}};
    auto margin = [&](Risk p, Scale s) {
        try {
            return f.margin_on_scale(p, s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateRatio) {
                throw;
            }
            return std::nan("");
        }
    };
    for (double x : parse_grid(a.grid)) {
        const Risk p(x);
        t.rows.push_back({x, f.tolerable_active_risk(p).value(), margin(p, Scale::RiskDifference),
                          margin(p, Scale::LogRiskRatio), margin(p, Scale::ArcsineDifference)});
    }
    return emit(t, g);
}

const std::vector<std::string> kGridColumns{"pi0", "rate", "mc_se", "modification_rate", "degenerate_rate", "reps",
                                            "alpha_used"};

std::string cmd_simulate(const SimArgs& a, const Global& g) {
    const ScenarioSpec s = load_scenario(a.scenario, parse_scale(a.scale));
    const Procedure proc{parse_procedure(a.procedure), parse_alpha_strategy(a.alpha_strategy, s.design.alpha)};
    const Hypothesis h = a.hypothesis == "alt" ? Hypothesis::Alternative : Hypothesis::Null;
    const std::vector<double> grid = parse_grid(a.grid);
    const auto rows = run_grid(s, proc, h, grid, a.reps, a.seed, a.options());
    Table t{kGridColumns, {}};
    for (const GridResult& r : rows) {
        t.rows.push_back({r.pi0, r.rejection_rate, r.mc_se, r.modification_rate, r.degenerate_rate, r.reps,
                          r.mean_alpha});
    }
    return emit(t, g);
}

struct CalibrateOutcome {
    std::string text;
    std::string lookup;
    std::vector<double> uncontrollable;
};

CalibrateOutcome cmd_calibrate(const SimArgs& a, const Global& g) {
    const ScenarioSpec s = load_scenario(a.scenario, parse_scale(a.scale));
    const std::vector<double> grid = parse_grid(a.grid);
    std::vector<double> candidates = a.alphas;
    std::sort(candidates.begin(), candidates.end());
    const CalibrationTable table =
        calibration_table(s, parse_procedure(a.procedure), grid, candidates, a.reps, a.seed, a.options());
    const CalibrationChoice choice = choose_alphas(table, s.design.alpha, a.slack);

    // Each row shows the rate at the chosen level; uncontrollable cells show
    // the smallest candidate so the excess is visible.
    Table t{kGridColumns, {}};
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        const CalibrationCell& c = table.cells[i];
        const double chosen = choice.chosen[i];
        const std::size_t k = std::isnan(chosen)
                                  ? 0
                                  : static_cast<std::size_t>(std::find(candidates.begin(), candidates.end(), chosen) -
                                                             candidates.begin());
        t.rows.push_back({c.pi0, c.rates[k], c.mc_se[k], c.modification_rate, c.degenerate_rate, c.reps,
                          candidates[k]});
    }
    CalibrateOutcome outcome;
    outcome.uncontrollable = choice.uncontrollable;
    if (outcome.uncontrollable.empty()) {
        outcome.lookup = lookup_to_json(compress_lookup(grid, choice.chosen)).dump(2) + "\n";
    }
    outcome.text = emit(t, g);
    return outcome;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    }
    f << text;
    if (!f) {
        fail(ErrorKind::InvalidArgument, "failed writing '" + path + "'");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-inferiority frontier design, analysis and simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Replay a run configuration written by --write-config");

    Global g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", g.out_path, "Write results to a file instead of standard output")->configurable(false);
    app.add_option("--write-config", g.write_config, "Save this run's configuration for replay")->configurable(false);

    DesignArgs design;
    auto* c_design = app.add_subcommand("design", "Sample size for a fixed-margin design");
    c_design->add_option("--scale", design.scale, "Analysis scale")
        ->check(CLI::IsMember({"rd", "rr", "as"}))
        ->capture_default_str();
    add_design_flags(c_design, design);
    c_design->add_option("--inflate-alpha", design.inflate_alpha, "Also size the trial at this reduced level");

    AnalyzeArgs analyze;
    auto* c_analyze = app.add_subcommand("analyze", "Analyse one trial");
    c_analyze->add_option("--n0", analyze.n0, "Control arm size")->required();
    c_analyze->add_option("--e0", analyze.e0, "Control arm events")->required();
    c_analyze->add_option("--n1", analyze.n1, "Active arm size")->required();
    c_analyze->add_option("--e1", analyze.e1, "Active arm events")->required();
    c_analyze->add_option("--method", analyze.method, "Analysis method")
        ->check(CLI::IsMember({"as", "backcalc-margin", "backcalc-alpha", "standard", "conditional"}))
        ->capture_default_str();
    c_analyze->add_option("--scale", analyze.design.scale, "Scale for standard and conditional analyses")
        ->check(CLI::IsMember({"rd", "rr", "as"}))
        ->capture_default_str();
    c_analyze->add_option("--epsilon", analyze.epsilon, "Modification threshold (default 0.0125 rd, log(1.25) rr)");
    c_analyze->add_option("--alpha-strategy", analyze.alpha_strategy, "nominal | fixed:<a> | lookup:<file>")
        ->capture_default_str();
    add_design_flags(c_analyze, analyze.design);

    FrontierArgs frontier;
    auto* c_frontier = app.add_subcommand("frontier", "Tabulate a non-inferiority frontier");
    c_frontier->add_option("--shape", frontier.shape, "Frontier shape")
        ->check(CLI::IsMember({"fixed-rd", "fixed-rr", "power-stabilising"}))
        ->capture_default_str();
    c_frontier->add_option("--pi-e0", frontier.pi_e0, "Control anchor")->capture_default_str();
    c_frontier->add_option("--pi-f1", frontier.pi_f1, "Tolerable active risk at the anchor")->capture_default_str();
    c_frontier->add_option("--grid", frontier.grid, "start:stop:step (default 0.005:0.2:0.005)");

    SimArgs sim;
    auto add_sim_flags = [&sim](CLI::App* cmd) {
        cmd->add_option("--scenario", sim.scenario, "Preset (base, alt1..alt7) or scenario JSON file")
            ->capture_default_str();
        cmd->add_option("--scale", sim.scale, "Analysis scale")
            ->check(CLI::IsMember({"rd", "rr"}))
            ->capture_default_str();
        cmd->add_option("--procedure", sim.procedure, "Margin modification procedure")
            ->check(CLI::IsMember({"none", "large", "medium", "small"}))
            ->capture_default_str();
        cmd->add_option("--reps", sim.reps, "Replications per grid point")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", sim.seed, "Master seed")->required();
        cmd->add_option("--grid", sim.grid, "start:stop:step (default 0.005:0.2:0.005)");
        cmd->add_option("--threads", sim.threads, "OpenMP threads (0: default)")->capture_default_str();
        cmd->add_flag("--serial", sim.serial, "Use the serial reference kernel");
    };
    auto* c_simulate = app.add_subcommand("simulate", "Rejection rates over a grid of control risks");
    add_sim_flags(c_simulate);
    c_simulate->add_option("--hypothesis", sim.hypothesis, "Boundary null or alternative")
        ->check(CLI::IsMember({"null", "alt"}))
        ->capture_default_str();
    c_simulate->add_option("--alpha-strategy", sim.alpha_strategy, "nominal | fixed:<a> | lookup:<file>")
        ->capture_default_str();
    auto* c_calibrate = app.add_subcommand("calibrate", "Choose a testing level per observed control risk");
    add_sim_flags(c_calibrate);
    c_calibrate->add_option("--alphas", sim.alphas, "Candidate levels")->delimiter(',')->capture_default_str();
    c_calibrate->add_option("--slack", sim.slack, "Allowance in Monte Carlo standard errors")->capture_default_str();
    c_calibrate->add_option("--lookup-out", sim.lookup_out, "Where to write the lookup table JSON")
        ->required()
        ->configurable(false);

    // Lets a saved configuration select its subcommand.
    for (CLI::App* cmd : {c_design, c_analyze, c_frontier, c_simulate, c_calibrate}) {
        cmd->configurable();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (!g.write_config.empty()) {
            // Global options, then the active subcommand's section with its
            // defaults spelled out.
            const CLI::App* cmd = app.get_subcommands().front();
            std::string text = "format=\"" + g.format + "\"\n[" + cmd->get_name() + "]\n";
            for (const std::string& line : CLI::detail::split(cmd->config_to_str(true, false), '\n')) {
                // Unset optional values stay unset on replay.
                if (!line.empty() && line.find("=\"\"") == std::string::npos) {
                    text += line + "\n";
                }
            }
            write_file(g.write_config, text);
        }
        std::string text;
        int code = kOk;
        if (*c_design) {
            text = cmd_design(design, g);
        } else if (*c_analyze) {
            text = cmd_analyze(analyze, g);
        } else if (*c_frontier) {
            text = cmd_frontier(frontier, g);
        } else if (*c_simulate) {
            text = cmd_simulate(sim, g);
        } else {
            const CalibrateOutcome c = cmd_calibrate(sim, g);
            text = c.text;
            if (c.uncontrollable.empty()) {
                write_file(sim.lookup_out, c.lookup);
            } else {
                err << "UncontrollableCell: no candidate level keeps the null rejection rate within target at pi0 =";
                for (double p : c.uncontrollable) {
                    err << ' ' << format6(p);
                }
                err << '\n';
                code = kCalibrationFailure;
            }
        }
        if (g.out_path.empty()) {
            out << text;
        } else {
            write_file(g.out_path, text);
        }
        return code;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.kind() == ErrorKind::UncontrollableCell ? kCalibrationFailure : kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace nifront::cli
