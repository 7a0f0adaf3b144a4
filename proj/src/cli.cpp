#include "rankbench/cli.hpp"

#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankbench/config.hpp"
#include "rankbench/error.hpp"
#include "rankbench/model.hpp"
#include "rankbench/report.hpp"
#include "rankbench/resampling.hpp"
#include "rankbench/scoring.hpp"
#include "rankbench/sensitivity.hpp"
#include "text_io.hpp"

namespace rankbench {

namespace {

struct Options {
    std::string input;
    std::string config;
    std::string format;
    std::string mechanism;
    int par_k = 10;
    std::vector<std::string> tiebreak;
    std::size_t replicates = kDefaultReplicates;
    std::uint64_t seed = 0;
    std::string stratified = "auto";
    double alpha = kDefaultAlpha;
    unsigned threads = 0;
    std::string output;
    std::string csv_dir;
    std::string plot_data;
    std::size_t top = 10;
    bool with_sensitivity = false;
    std::string summary;
};

const std::map<std::string, MechanismKind> kMechanisms = {
    {"solved_count", MechanismKind::solved_count}, {"optimal_count", MechanismKind::optimal_count},
    {"par_k", MechanismKind::par_k},               {"ipc_quality", MechanismKind::ipc_quality},
    {"ipc_agile", MechanismKind::ipc_agile},       {"mean_metric", MechanismKind::mean_metric},
};

void add_data_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Run-results file (CSV or JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--config", o.config, "Competition config JSON (cutoff, strata, reference)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", o.format, "Input format; inferred from the extension when omitted")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--mechanism", o.mechanism, "Scoring mechanism")
        ->required()
        ->check(CLI::IsMember({"solved_count", "optimal_count", "par_k", "ipc_quality", "ipc_agile", "mean_metric"}));
    cmd->add_option("--par-k", o.par_k, "Penalty factor for par_k")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--tiebreak", o.tiebreak, "Tie-break chain for the official listing (total_time, solver_id)")
        ->delimiter(',')
        ->check(CLI::IsMember({"total_time", "solver_id"}));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores; falls back to RANKBENCH_THREADS)");
}

void add_resampling_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--replicates", o.replicates, "Bootstrap replicates k")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Master RNG seed")->capture_default_str();
    cmd->add_option("--stratified", o.stratified, "Stratified resampling")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "on", "off"}));
}

unsigned resolve_thread_flag(const Options& o) {
    if (o.threads > 0) return o.threads;
    if (const char* env = std::getenv("RANKBENCH_THREADS")) {
        std::uint64_t v = 0;
        if (detail::parse_u64(env, v) && v > 0) return static_cast<unsigned>(v);
    }
    return 0;
}

Dataset load(const Options& o) {
    const auto format = o.format.empty() ? infer_format(o.input) : (o.format == "json" ? InputFormat::json : InputFormat::csv);
    std::optional<std::filesystem::path> config;
    if (!o.config.empty()) config = o.config;
    return load_dataset(o.input, format, config);
}

AnalysisConfig make_config(const Options& o, const Dataset& d) {
    AnalysisConfig cfg;
    cfg.mechanism = {kMechanisms.at(o.mechanism), o.par_k};
    cfg.replicates = o.replicates;
    cfg.alpha = o.alpha;
    cfg.master_seed = o.seed;
    const auto mode = o.stratified == "on" ? StratifyMode::on : o.stratified == "off" ? StratifyMode::off : StratifyMode::automatic;
    cfg.stratified = resolve_stratified(mode, d);
    for (const auto& key : o.tiebreak) cfg.tiebreak.push_back(*parse_tiebreak(key));
    validate_config(cfg);
    return cfg;
}

nlohmann::json counts_summary(const SensitivityReport& rep, const Dataset& d) {
    return {{"instances", rep.instances.size()},
            {"solvers", d.solver_count()},
            {"counts",
             {{"any_change", rep.counts.any_change},
              {"any_rank_change", rep.counts.any_rank_change},
              {"top10_comp", rep.counts.top10_comp},
              {"top10_order", rep.counts.top10_order},
              {"top3_comp", rep.counts.top3_comp},
              {"top3_order", rep.counts.top3_order}}}};
}

int run_analyze(const Options& o, std::ostream& out) {
    const auto d = load(o);
    const auto cfg = make_config(o, d);
    const unsigned threads = resolve_thread_flag(o);
    const auto m = generate_score_matrix(d, cfg, threads);
    std::optional<SensitivityReport> sens;
    if (o.with_sensitivity) sens = leave_one_out_analysis(d, cfg, threads);
    const auto report = build_report(d, cfg, m, sens ? &*sens : nullptr);
    emit_json(report, o.output);
    if (!o.csv_dir.empty()) emit_csv(report, o.csv_dir);
    if (!o.plot_data.empty()) emit_plot_data(report, o.plot_data, o.top);
    out << "wrote " << o.output << " (" << report.groups.size() << " groups, " << cfg.replicates << " replicates)\n";
    return kExitOk;
}

int run_sensitivity(const Options& o, std::ostream& out) {
    const auto d = load(o);
    const auto cfg = make_config(o, d);
    const auto rep = leave_one_out_analysis(d, cfg, resolve_thread_flag(o));
    detail::write_file(o.output, sensitivity_csv(rep));
    const auto summary = counts_summary(rep, d).dump(2) + "\n";
    if (o.summary.empty()) {
        out << summary;
    } else {
        detail::write_file(o.summary, summary);
    }
    return kExitOk;
}

int run_score(const Options& o, std::ostream& out) {
    const auto d = load(o);
    const auto cfg = make_config(o, d);
    const auto sv = compute_scores(d, cfg.mechanism, all_runs(d));
    const auto ranking = official_ranking(sv, d, cfg.tiebreak);
    std::string csv = "position,rank,solver,score\n";
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
        const auto s = ranking.order[i];
        csv += detail::csv_join({std::to_string(i + 1), std::to_string(ranking.ranks[s]), d.solvers[s],
                                 detail::format_double(sv.scores[s])});
        csv.push_back('\n');
    }
    if (o.output.empty()) {
        out << csv;
    } else {
        detail::write_file(o.output, csv);
    }
    return kExitOk;
}

int run_matrix(const Options& o, std::ostream& out) {
    const auto d = load(o);
    const auto cfg = make_config(o, d);
    const auto m = generate_score_matrix(d, cfg, resolve_thread_flag(o));
    detail::write_file(o.output, m.to_csv());
    out << "wrote " << o.output << " (" << m.replicates() << " x " << m.solver_count() << ")\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rankbench: robust rankings for solver competitions via bootstrap resampling", "rankbench"};
    app.require_subcommand(1);
    Options o;

    auto* analyze = app.add_subcommand("analyze", "Full pipeline: matrix, intervals, robust ranking, report");
    add_data_flags(analyze, o);
    add_resampling_flags(analyze, o);
    analyze->add_option("--alpha", o.alpha, "Significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--output", o.output, "Report JSON path")->required();
    analyze->add_option("--csv-dir", o.csv_dir, "Also write CSV tables into this directory");
    analyze->add_option("--plot-data", o.plot_data, "Also write confidence-interval plot data CSV");
    analyze->add_option("--top", o.top, "Rows in the plot data")->capture_default_str()->check(CLI::PositiveNumber);
    analyze->add_flag("--with-sensitivity", o.with_sensitivity, "Fold the leave-one-instance-out analysis into the report");

    auto* sensitivity = app.add_subcommand("sensitivity", "Leave-one-instance-out ranking changes");
    add_data_flags(sensitivity, o);
    sensitivity->add_option("--output", o.output, "Per-instance CSV path")->required();
    sensitivity->add_option("--summary", o.summary, "Aggregate JSON path (stdout when omitted)");

    auto* score = app.add_subcommand("score", "Official scores and ranking on the full benchmark");
    add_data_flags(score, o);
    score->add_option("--output", o.output, "Ranking CSV path (stdout when omitted)");

    auto* matrix = app.add_subcommand("matrix", "Dump the bootstrap score matrix");
    add_data_flags(matrix, o);
    add_resampling_flags(matrix, o);
    matrix->add_option("--output", o.output, "Matrix CSV path")->required();

    std::vector<const char*> argv{"rankbench"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) return run_analyze(o, out);
        if (sensitivity->parsed()) return run_sensitivity(o, out);
        if (score->parsed()) return run_score(o, out);
        return run_matrix(o, out);
    } catch (const UsageError& e) {
        err << "rankbench: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "rankbench: " << e.what() << "\n";
        return kExitDataError;
    }
}

}  // namespace rankbench
