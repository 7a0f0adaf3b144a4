#include "rankbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rankbench/error.hpp"
#include "rankbench/ranking.hpp"
#include "rankbench/stats.hpp"
#include "text_io.hpp"

namespace rankbench {

using nlohmann::json;

namespace {

DiagnosticsBlock make_block(const ScoreMatrix& m, const OfficialRanking& official, const RobustRanking& rr,
                            std::size_t top) {
    const auto& ids = m.solver_order();
    const auto subset = top_subset(official, top);
    const auto diag = compute_diagnostics(m, official, rr, subset);
    DiagnosticsBlock b;
    for (auto s : subset) b.solvers.push_back(ids[s]);
    b.groups = diag.groups;
    b.ties = diag.ties;
    b.inversions = diag.inversions.count;
    for (auto [lo, hi] : diag.inversions.pairs) b.inversion_pairs.emplace_back(ids[lo], ids[hi]);
    b.mean_rank_iqr = diag.mean_rank_iqr;
    return b;
}

std::vector<std::string> names(const std::vector<std::size_t>& idx, const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(ids[i]);
    return out;
}

json block_json(const DiagnosticsBlock& b) {
    json pairs = json::array();
    for (const auto& [a, c] : b.inversion_pairs) pairs.push_back({a, c});
    return {{"solvers", b.solvers},     {"groups", b.groups},       {"ties", b.ties},
            {"inversions", b.inversions}, {"inversion_pairs", pairs}, {"mean_rank_iqr", b.mean_rank_iqr}};
}

DiagnosticsBlock block_from_json(const json& j) {
    DiagnosticsBlock b;
    b.solvers = j.at("solvers").get<std::vector<std::string>>();
    b.groups = j.at("groups").get<std::size_t>();
    b.ties = j.at("ties").get<std::size_t>();
    b.inversions = j.at("inversions").get<std::size_t>();
    for (const auto& p : j.at("inversion_pairs")) {
        b.inversion_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    b.mean_rank_iqr = j.at("mean_rank_iqr").get<double>();
    return b;
}

json counts_json(const SensitivityCounts& c) {
    return {{"any_change", c.any_change}, {"any_rank_change", c.any_rank_change}, {"top10_comp", c.top10_comp},
            {"top10_order", c.top10_order}, {"top3_comp", c.top3_comp},          {"top3_order", c.top3_order}};
}

SensitivityCounts counts_from_json(const json& j) {
    SensitivityCounts c;
    c.any_change = j.at("any_change").get<std::size_t>();
    c.any_rank_change = j.at("any_rank_change").get<std::size_t>();
    c.top10_comp = j.at("top10_comp").get<std::size_t>();
    c.top10_order = j.at("top10_order").get<std::size_t>();
    c.top3_comp = j.at("top3_comp").get<std::size_t>();
    c.top3_order = j.at("top3_order").get<std::size_t>();
    return c;
}

}  // namespace

AnalysisReport build_report(const Dataset& d, const AnalysisConfig& cfg, const ScoreMatrix& m,
                            const SensitivityReport* sensitivity) {
    validate_config(cfg);
    const MatrixProvenance expected{cfg.master_seed, cfg.stratified, cfg.mechanism};
    if (m.provenance() != expected || m.replicates() != cfg.replicates || m.solver_order() != d.solvers) {
        throw DataError("score matrix provenance does not match the analysis config");
    }

    const auto& ids = d.solvers;
    const std::size_t n = ids.size();
    const auto official_scores = compute_scores(d, cfg.mechanism, all_runs(d));
    const auto official = official_ranking(official_scores, d, cfg.tiebreak);
    const auto rr = robust_ranking(m, cfg.alpha);
    const auto wins = empirical_win_fractions(m);
    const auto medians = median_scores(m);
    const auto group_of = rr.group_of(n);
    const auto frac_of = rr.fractional_rank_of(n);

    AnalysisReport r;
    r.config = cfg;
    r.dataset = {n, d.run_count(), d.instances().size(), d.partition_by_stratum().size()};
    r.official_order = names(official.order, ids);

    for (std::size_t s = 0; s < n; ++s) {
        const auto ci = percentile_ci(m.score_column(s), cfg.alpha);
        SolverSummary row;
        row.id = ids[s];
        row.official_rank = official.ranks[s];
        row.official_score = official_scores.scores[s];
        row.median_score = medians[s];
        row.ci_lower = ci.lower;
        row.ci_upper = ci.upper;
        row.win_fraction = wins.fractions[s];
        row.first_place_count = wins.first_counts[s];
        row.group = group_of[s];
        row.fractional_rank = frac_of[s];
        row.rank_iqr = rank_iqr(m, s);
        row.score_iqr = score_iqr(m, s);
        r.solvers.push_back(std::move(row));
    }

    for (const auto& g : rr.groups) r.groups.push_back({g.index, g.fractional_rank, names(g.members, ids)});
    for (const auto& it : rr.iterations) {
        r.iterations.push_back(
            {ids[it.winner], names(it.candidates, ids), it.p_values, it.thresholds, names(it.rejected, ids)});
    }

    r.all = make_block(m, official, rr, n);
    r.top10 = make_block(m, official, rr, 10);
    r.top3 = make_block(m, official, rr, 3);

    if (sensitivity) {
        SensitivitySection sec;
        sec.baseline_order = names(sensitivity->baseline.order, ids);
        sec.counts = sensitivity->counts;
        sec.instances = sensitivity->instances;
        r.sensitivity = std::move(sec);
    }
    return r;
}

json to_json(const AnalysisReport& r) {
    json tiebreak = json::array();
    for (auto key : r.config.tiebreak) tiebreak.push_back(to_string(key));
    json config = {
        {"mechanism", {{"id", to_string(r.config.mechanism.kind)}, {"par_k", r.config.mechanism.par_factor}}},
        {"replicates", r.config.replicates},
        {"alpha", r.config.alpha},
        {"master_seed", r.config.master_seed},
        {"stratified", r.config.stratified},
        {"tiebreak", tiebreak},
    };

    json solvers = json::array();
    for (const auto& s : r.solvers) {
        solvers.push_back({{"id", s.id},
                           {"official_rank", s.official_rank},
                           {"official_score", s.official_score},
                           {"median_score", s.median_score},
                           {"ci_lower", s.ci_lower},
                           {"ci_upper", s.ci_upper},
                           {"win_fraction", s.win_fraction},
                           {"first_place_count", s.first_place_count},
                           {"group", s.group},
                           {"fractional_rank", s.fractional_rank},
                           {"rank_iqr", s.rank_iqr},
                           {"score_iqr", s.score_iqr}});
    }

    json groups = json::array();
    for (const auto& g : r.groups) {
        groups.push_back({{"index", g.index}, {"fractional_rank", g.fractional_rank}, {"members", g.members}});
    }
    json iterations = json::array();
    for (const auto& it : r.iterations) {
        iterations.push_back({{"winner", it.winner},
                              {"candidates", it.candidates},
                              {"p_values", it.p_values},
                              {"holm_thresholds", it.thresholds},
                              {"rejected", it.rejected}});
    }

    json doc = {
        {"config", config},
        {"dataset",
         {{"solvers", r.dataset.solvers},
          {"runs", r.dataset.runs},
          {"instances", r.dataset.instances},
          {"strata", r.dataset.strata}}},
        {"official", {{"order", r.official_order}}},
        {"solvers", solvers},
        {"robust_ranking", {{"groups", groups}, {"iterations", iterations}}},
        {"diagnostics", {{"all", block_json(r.all)}, {"top10", block_json(r.top10)}, {"top3", block_json(r.top3)}}},
    };

    if (r.sensitivity) {
        json rows = json::array();
        for (const auto& row : r.sensitivity->instances) {
            rows.push_back({{"instance", row.instance},
                            {"any_change", row.any_change},
                            {"any_rank_change", row.any_rank_change},
                            {"top10_comp", row.top10_comp},
                            {"top10_order", row.top10_order},
                            {"top3_comp", row.top3_comp},
                            {"top3_order", row.top3_order}});
        }
        doc["sensitivity"] = {{"baseline_order", r.sensitivity->baseline_order},
                              {"counts", counts_json(r.sensitivity->counts)},
                              {"instances", rows}};
    }
    return doc;
}

AnalysisReport report_from_json(const json& j) {
    try {
        AnalysisReport r;
        const auto& c = j.at("config");
        const auto mech = parse_mechanism(c.at("mechanism").at("id").get<std::string>());
        if (!mech) throw ParseError("report: unknown mechanism");
        r.config.mechanism = {*mech, c.at("mechanism").at("par_k").get<int>()};
        r.config.replicates = c.at("replicates").get<std::size_t>();
        r.config.alpha = c.at("alpha").get<double>();
        r.config.master_seed = c.at("master_seed").get<std::uint64_t>();
        r.config.stratified = c.at("stratified").get<bool>();
        for (const auto& key : c.at("tiebreak")) {
            const auto tb = parse_tiebreak(key.get<std::string>());
            if (!tb) throw ParseError("report: unknown tiebreak key");
            r.config.tiebreak.push_back(*tb);
        }

        const auto& ds = j.at("dataset");
        r.dataset = {ds.at("solvers").get<std::size_t>(), ds.at("runs").get<std::size_t>(),
                     ds.at("instances").get<std::size_t>(), ds.at("strata").get<std::size_t>()};
        r.official_order = j.at("official").at("order").get<std::vector<std::string>>();

        for (const auto& s : j.at("solvers")) {
            SolverSummary row;
            row.id = s.at("id").get<std::string>();
            row.official_rank = s.at("official_rank").get<std::int32_t>();
            row.official_score = s.at("official_score").get<double>();
            row.median_score = s.at("median_score").get<double>();
            row.ci_lower = s.at("ci_lower").get<double>();
            row.ci_upper = s.at("ci_upper").get<double>();
            row.win_fraction = s.at("win_fraction").get<double>();
            row.first_place_count = s.at("first_place_count").get<std::size_t>();
            row.group = s.at("group").get<std::size_t>();
            row.fractional_rank = s.at("fractional_rank").get<double>();
            row.rank_iqr = s.at("rank_iqr").get<double>();
            row.score_iqr = s.at("score_iqr").get<double>();
            r.solvers.push_back(std::move(row));
        }

        const auto& rr = j.at("robust_ranking");
        for (const auto& g : rr.at("groups")) {
            r.groups.push_back({g.at("index").get<std::size_t>(), g.at("fractional_rank").get<double>(),
                                g.at("members").get<std::vector<std::string>>()});
        }
        for (const auto& it : rr.at("iterations")) {
            r.iterations.push_back({it.at("winner").get<std::string>(),
                                    it.at("candidates").get<std::vector<std::string>>(),
                                    it.at("p_values").get<std::vector<double>>(),
                                    it.at("holm_thresholds").get<std::vector<double>>(),
                                    it.at("rejected").get<std::vector<std::string>>()});
        }

        const auto& diag = j.at("diagnostics");
        r.all = block_from_json(diag.at("all"));
        r.top10 = block_from_json(diag.at("top10"));
        r.top3 = block_from_json(diag.at("top3"));

        if (auto it = j.find("sensitivity"); it != j.end()) {
            SensitivitySection sec;
            sec.baseline_order = it->at("baseline_order").get<std::vector<std::string>>();
            sec.counts = counts_from_json(it->at("counts"));
            for (const auto& row : it->at("instances")) {
                sec.instances.push_back({row.at("instance").get<std::string>(), row.at("any_change").get<bool>(),
                                         row.at("any_rank_change").get<bool>(), row.at("top10_comp").get<bool>(),
                                         row.at("top10_order").get<bool>(), row.at("top3_comp").get<bool>(),
                                         row.at("top3_order").get<bool>()});
            }
            r.sensitivity = std::move(sec);
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
}

std::string report_json_text(const AnalysisReport& r) { return to_json(r).dump(2) + "\n"; }

std::string plot_data_csv(const AnalysisReport& r, std::size_t top) {
    std::map<std::string, const SolverSummary*> by_id;
    for (const auto& s : r.solvers) by_id[s.id] = &s;
    std::string out = "solver,official_rank,official_score,median_score,ci_lower,ci_upper\n";
    const std::size_t rows = std::min(top, r.official_order.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& s = *by_id.at(r.official_order[i]);
        out += detail::csv_join({s.id, std::to_string(s.official_rank), detail::format_double(s.official_score),
                                 detail::format_double(s.median_score), detail::format_double(s.ci_lower),
                                 detail::format_double(s.ci_upper)});
        out.push_back('\n');
    }
    return out;
}

void emit_json(const AnalysisReport& r, const std::filesystem::path& path) {
    detail::write_file(path, report_json_text(r));
}

void emit_plot_data(const AnalysisReport& r, const std::filesystem::path& path, std::size_t top) {
    detail::write_file(path, plot_data_csv(r, top));
}

void emit_csv(const AnalysisReport& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

    std::map<std::string, const SolverSummary*> by_id;
    for (const auto& s : r.solvers) by_id[s.id] = &s;

    std::string solvers =
        "solver,official_rank,official_score,median_score,ci_lower,ci_upper,win_fraction,group,fractional_rank,"
        "rank_iqr,score_iqr\n";
    for (const auto& id : r.official_order) {
        const auto& s = *by_id.at(id);
        solvers += detail::csv_join({s.id, std::to_string(s.official_rank), detail::format_double(s.official_score),
                                     detail::format_double(s.median_score), detail::format_double(s.ci_lower),
                                     detail::format_double(s.ci_upper), detail::format_double(s.win_fraction),
                                     std::to_string(s.group), detail::format_double(s.fractional_rank),
                                     detail::format_double(s.rank_iqr), detail::format_double(s.score_iqr)});
        solvers.push_back('\n');
    }
    detail::write_file(dir / "solvers.csv", solvers);

    std::string groups = "group,fractional_rank,solver\n";
    for (const auto& g : r.groups) {
        for (const auto& member : g.members) {
            groups += detail::csv_join({std::to_string(g.index), detail::format_double(g.fractional_rank), member});
            groups.push_back('\n');
        }
    }
    detail::write_file(dir / "groups.csv", groups);

    std::string diag = "scope,solvers,groups,ties,inversions,mean_rank_iqr\n";
    for (const auto& [scope, b] : {std::pair{"all", &r.all}, std::pair{"top10", &r.top10}, std::pair{"top3", &r.top3}}) {
        diag += detail::csv_join({scope, std::to_string(b->solvers.size()), std::to_string(b->groups),
                                  std::to_string(b->ties), std::to_string(b->inversions),
                                  detail::format_double(b->mean_rank_iqr)});
        diag.push_back('\n');
    }
    detail::write_file(dir / "diagnostics.csv", diag);

    if (r.sensitivity) {
        SensitivityReport tmp;
        tmp.instances = r.sensitivity->instances;
        detail::write_file(dir / "sensitivity.csv", sensitivity_csv(tmp));
    }
}

std::vector<std::string> check_report_consistency(const AnalysisReport& r) {
    std::vector<std::string> bad;
    const std::size_t n = r.solvers.size();

    std::map<std::string, std::size_t> index;
    std::vector<std::string> ids;
    for (const auto& s : r.solvers) {
        if (!index.emplace(s.id, ids.size()).second) bad.push_back("solver '" + s.id + "' listed twice");
        ids.push_back(s.id);
    }
    if (n != r.dataset.solvers) bad.push_back("solver section size differs from dataset summary");
    if (!bad.empty()) return bad;

    auto lookup = [&](const std::string& id) -> std::size_t {
        auto it = index.find(id);
        if (it == index.end()) throw DataError("unknown solver '" + id + "' in report");
        return it->second;
    };

    try {
        // Official ranking.
        OfficialRanking official;
        for (const auto& id : r.official_order) official.order.push_back(lookup(id));
        if (std::set<std::size_t>(official.order.begin(), official.order.end()).size() != n ||
            official.order.size() != n) {
            bad.push_back("official order is not a permutation of the solvers");
        }
        std::vector<double> scores(n);
        for (std::size_t s = 0; s < n; ++s) {
            scores[s] = r.solvers[s].official_score;
            official.ranks.push_back(r.solvers[s].official_rank);
        }
        std::vector<std::int32_t> expected_ranks(n);
        min_ranks(scores, expected_ranks);
        if (expected_ranks != official.ranks) bad.push_back("official ranks are not min-ranks of official scores");
        for (std::size_t i = 1; i < official.order.size(); ++i) {
            if (scores[official.order[i - 1]] < scores[official.order[i]]) {
                bad.push_back("official order is not sorted by score");
                break;
            }
        }

        // Groups.
        RobustRanking rr;
        std::vector<std::size_t> sizes;
        std::size_t covered = 0;
        for (std::size_t g = 0; g < r.groups.size(); ++g) {
            const auto& rg = r.groups[g];
            if (rg.index != g + 1) bad.push_back("group indices are not consecutive from 1");
            RankGroup group{rg.index, {}, rg.fractional_rank};
            for (const auto& id : rg.members) group.members.push_back(lookup(id));
            if (group.members.empty()) bad.push_back("empty group " + std::to_string(rg.index));
            covered += group.members.size();
            sizes.push_back(group.members.size());
            rr.groups.push_back(std::move(group));
        }
        const auto expect_frac = fractional_ranks(sizes);
        double frac_sum = 0.0;
        for (std::size_t g = 0; g < rr.groups.size(); ++g) {
            if (rr.groups[g].fractional_rank != expect_frac[g]) bad.push_back("fractional rank of group " + std::to_string(g + 1));
            frac_sum += expect_frac[g] * static_cast<double>(sizes[g]);
        }
        if (covered != n) bad.push_back("groups do not partition the solvers");
        if (std::abs(frac_sum - static_cast<double>(n * (n + 1)) / 2.0) > 1e-9) bad.push_back("fractional rank sum");
        if (!bad.empty()) return bad;

        const auto group_of = rr.group_of(n);
        const auto frac_of = rr.fractional_rank_of(n);
        double win_sum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const auto& row = r.solvers[s];
            if (row.group != group_of[s]) bad.push_back("group of '" + row.id + "'");
            if (row.fractional_rank != frac_of[s]) bad.push_back("fractional rank of '" + row.id + "'");
            if (!(row.ci_lower <= row.median_score && row.median_score <= row.ci_upper)) {
                bad.push_back("median outside CI for '" + row.id + "'");
            }
            if (!(row.win_fraction >= 0.0 && row.win_fraction <= 1.0)) bad.push_back("win fraction of '" + row.id + "'");
            win_sum += row.win_fraction;
        }
        if (win_sum < 1.0 - 1e-9) bad.push_back("win fractions sum to less than 1");

        // Iteration log.
        if (r.iterations.size() != r.groups.size()) bad.push_back("one iteration per group expected");
        for (std::size_t g = 0; g < std::min(r.iterations.size(), r.groups.size()); ++g) {
            const auto& it = r.iterations[g];
            const auto& members = r.groups[g].members;
            if (std::find(members.begin(), members.end(), it.winner) == members.end()) {
                bad.push_back("iteration " + std::to_string(g + 1) + " winner not in its group");
            }
            if (it.p_values.size() != it.candidates.size() || it.thresholds.size() != it.candidates.size()) {
                bad.push_back("iteration " + std::to_string(g + 1) + " log sizes");
                continue;
            }
            std::vector<std::size_t> rejected_pos = holm_bonferroni(it.p_values, r.config.alpha);
            std::vector<std::string> rejected;
            for (auto pos : rejected_pos) rejected.push_back(it.candidates[pos]);
            auto sorted_log = it.rejected;
            std::sort(sorted_log.begin(), sorted_log.end());
            std::sort(rejected.begin(), rejected.end());
            if (sorted_log != rejected) bad.push_back("iteration " + std::to_string(g + 1) + " Holm rejections");
            if (members.size() != 1 + it.candidates.size() - it.rejected.size()) {
                bad.push_back("iteration " + std::to_string(g + 1) + " group size");
            }
        }

        // Diagnostics.
        for (const auto& [name, block, top] : {std::tuple{"all", &r.all, n}, std::tuple{"top10", &r.top10, std::size_t{10}},
                                               std::tuple{"top3", &r.top3, std::size_t{3}}}) {
            const auto subset = top_subset(official, top);
            std::vector<std::string> subset_ids;
            for (auto s : subset) subset_ids.push_back(ids[s]);
            const std::string label = std::string("diagnostics.") + name;
            if (block->solvers != subset_ids) bad.push_back(label + " subset");
            if (block->groups != group_count(rr, subset)) bad.push_back(label + " groups");
            if (block->ties != tied_pair_count(rr, subset)) bad.push_back(label + " ties");
            const auto inv = inversion_count(official, rr, subset);
            std::vector<std::pair<std::string, std::string>> inv_pairs;
            for (auto [a, b] : inv.pairs) inv_pairs.emplace_back(ids[a], ids[b]);
            if (block->inversions != inv.count || block->inversion_pairs != inv_pairs) bad.push_back(label + " inversions");
            double sum = 0.0;
            for (auto s : subset) sum += r.solvers[s].rank_iqr;
            const double mean = subset.empty() ? 0.0 : sum / static_cast<double>(subset.size());
            if (std::abs(mean - block->mean_rank_iqr) > 1e-12) bad.push_back(label + " mean rank IQR");
        }
    } catch (const DataError& e) {
        bad.push_back(e.what());
    }
    return bad;
}

}  // namespace rankbench
