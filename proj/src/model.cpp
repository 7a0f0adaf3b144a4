#include "rankbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rankbench/error.hpp"
#include "text_io.hpp"

namespace rankbench {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader = "solver,instance,seed,status,cpu_time,quality";

constexpr std::pair<RunStatus, std::string_view> kStatusTokens[] = {
    {RunStatus::solved, "solved"},   {RunStatus::solved_optimal, "solved_optimal"},
    {RunStatus::unsolved, "unsolved"}, {RunStatus::timeout, "timeout"},
    {RunStatus::crashed, "crashed"}, {RunStatus::incorrect, "incorrect"},
};

struct RawRow {
    std::string solver;
    RunKey run;
    RunRecord record;
};

std::string describe(const std::string& solver, const RunKey& run) {
    return "(" + solver + ", " + to_string(run) + ")";
}

std::vector<RawRow> parse_csv_rows(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    auto records = detail::parse_csv(text);
    if (records.empty()) throw ParseError("results CSV is empty");
    if (detail::csv_join(records.front().fields) != kCsvHeader) {
        throw ParseError("results CSV header must be exactly '" + std::string(kCsvHeader) + "'");
    }

    std::vector<RawRow> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        auto fail = [&](const std::string& what) {
            throw ParseError("line " + std::to_string(rec.line) + ": " + what);
        };
        if (rec.fields.size() != 6) {
            fail("expected 6 fields, found " + std::to_string(rec.fields.size()));
        }
        RawRow row;
        row.solver = rec.fields[0];
        row.run.instance_id = rec.fields[1];
        if (row.solver.empty()) fail("empty solver id");
        if (row.run.instance_id.empty()) fail("empty instance id");
        if (!detail::parse_u64(rec.fields[2], row.run.seed)) fail("invalid seed '" + rec.fields[2] + "'");
        auto status = parse_status(rec.fields[3]);
        if (!status) fail("unknown status '" + rec.fields[3] + "'");
        row.record.status = *status;
        if (!detail::parse_double(rec.fields[4], row.record.cpu_time)) {
            fail("invalid cpu_time '" + rec.fields[4] + "'");
        }
        if (!rec.fields[5].empty()) {
            double q = 0.0;
            if (!detail::parse_double(rec.fields[5], q)) fail("invalid quality '" + rec.fields[5] + "'");
            row.record.quality = q;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RawRow> parse_json_rows(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("results JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array()) {
        throw ParseError("results JSON must be an object with a \"results\" array");
    }
    std::vector<RawRow> rows;
    std::size_t index = 0;
    for (const auto& item : doc["results"]) {
        auto fail = [&](const std::string& what) {
            throw ParseError("results[" + std::to_string(index) + "]: " + what);
        };
        if (!item.is_object()) fail("not an object");
        RawRow row;
        try {
            row.solver = item.at("solver").get<std::string>();
            row.run.instance_id = item.at("instance").get<std::string>();
            const auto& seed = item.at("seed");
            if (!seed.is_number_unsigned()) fail("seed must be a non-negative integer");
            row.run.seed = seed.get<std::uint64_t>();
            auto status = parse_status(item.at("status").get<std::string>());
            if (!status) fail("unknown status");
            row.record.status = *status;
            if (!item.at("cpu_time").is_number()) fail("cpu_time must be a number");
            row.record.cpu_time = item.at("cpu_time").get<double>();
            if (auto it = item.find("quality"); it != item.end() && !it->is_null()) {
                if (!it->is_number()) fail("quality must be a number or null");
                row.record.quality = it->get<double>();
            }
        } catch (const json::exception& e) {
            fail(e.what());
        }
        if (row.solver.empty()) fail("empty solver id");
        if (row.run.instance_id.empty()) fail("empty instance id");
        rows.push_back(std::move(row));
        ++index;
    }
    return rows;
}

RunKey parse_reference_key(const std::string& key) {
    const auto at = key.rfind('@');
    if (at == std::string::npos || at == 0) {
        throw ParseError("reference key '" + key + "' is not of the form instance@seed");
    }
    RunKey run;
    run.instance_id = key.substr(0, at);
    if (!detail::parse_u64(std::string_view(key).substr(at + 1), run.seed)) {
        throw ParseError("reference key '" + key + "' has an invalid seed");
    }
    return run;
}

void apply_config(Dataset& d, std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config JSON must be an object");

    if (auto it = doc.find("cutoff_seconds"); it != doc.end()) {
        if (!it->is_number()) throw ParseError("cutoff_seconds must be a number");
        d.cutoff = it->get<double>();
    }
    if (auto it = doc.find("strata"); it != doc.end()) {
        if (!it->is_object()) throw ParseError("strata must be an object");
        for (const auto& [instance, label] : it->items()) {
            if (!label.is_string()) throw ParseError("stratum of '" + instance + "' must be a string");
            d.strata[instance] = label.get<std::string>();
        }
    }
    if (auto it = doc.find("reference"); it != doc.end()) {
        if (!it->is_object()) throw ParseError("reference must be an object");
        for (const auto& [key, value] : it->items()) {
            if (!value.is_object()) throw ParseError("reference '" + key + "' must be an object");
            ReferenceData ref;
            for (const auto& [field, slot] :
                 {std::pair{"best_known_quality", &ref.best_known_quality},
                  std::pair{"reference_time", &ref.reference_time}}) {
                if (auto f = value.find(field); f != value.end()) {
                    if (!f->is_number()) {
                        throw ParseError("reference '" + key + "'." + field + " must be a number");
                    }
                    *slot = f->get<double>();
                }
            }
            d.reference[parse_reference_key(key)] = ref;
        }
    }
}

Dataset assemble(std::vector<RawRow> rows) {
    Dataset d;
    std::map<std::string, std::size_t, std::less<>> solver_ix;
    std::map<RunKey, std::size_t> run_ix;
    for (const auto& row : rows) {
        if (solver_ix.emplace(row.solver, d.solvers.size()).second) d.solvers.push_back(row.solver);
        if (run_ix.emplace(row.run, d.runs.size()).second) d.runs.push_back(row.run);
    }

    const std::size_t n_runs = d.runs.size();
    std::vector<std::optional<RunRecord>> table(d.solvers.size() * n_runs);
    for (auto& row : rows) {
        auto& slot = table[solver_ix.at(row.solver) * n_runs + run_ix.at(row.run)];
        if (slot) throw DataError("duplicate result for " + describe(row.solver, row.run));
        slot = row.record;
    }

    d.results.reserve(table.size());
    for (std::size_t s = 0; s < d.solvers.size(); ++s) {
        for (std::size_t r = 0; r < n_runs; ++r) {
            auto& slot = table[s * n_runs + r];
            if (!slot) throw DataError("missing result for " + describe(d.solvers[s], d.runs[r]));
            d.results.push_back(*slot);
        }
    }
    d.cutoff = std::numeric_limits<double>::infinity();
    return d;
}

}  // namespace

std::string_view to_string(RunStatus status) {
    for (const auto& [s, token] : kStatusTokens) {
        if (s == status) return token;
    }
    return "unknown";
}

std::optional<RunStatus> parse_status(std::string_view token) {
    for (const auto& [s, name] : kStatusTokens) {
        if (name == token) return s;
    }
    return std::nullopt;
}

std::string to_string(const RunKey& key) {
    return key.instance_id + "@" + std::to_string(key.seed);
}

std::optional<std::size_t> Dataset::solver_index(std::string_view id) const {
    auto it = std::find(solvers.begin(), solvers.end(), id);
    if (it == solvers.end()) return std::nullopt;
    return static_cast<std::size_t>(it - solvers.begin());
}

const ReferenceData* Dataset::reference_for(std::size_t run) const {
    auto it = reference.find(runs[run]);
    return it == reference.end() ? nullptr : &it->second;
}

std::vector<Stratum> Dataset::partition_by_stratum() const {
    std::vector<Stratum> out;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        auto it = strata.find(runs[r].instance_id);
        const std::string label = it == strata.end() ? std::string(kDefaultStratum) : it->second;
        auto [pos, inserted] = index.emplace(label, out.size());
        if (inserted) out.push_back(Stratum{label, {}});
        out[pos->second].runs.push_back(r);
    }
    return out;
}

std::vector<std::string> Dataset::instances() const {
    std::vector<std::string> out;
    std::set<std::string_view> seen;
    for (const auto& run : runs) {
        if (seen.insert(run.instance_id).second) out.push_back(run.instance_id);
    }
    return out;
}

std::vector<std::string> validate_dataset(const Dataset& d) {
    std::vector<std::string> v;
    if (d.solvers.size() < 2) v.push_back("dataset needs at least 2 solvers, has " + std::to_string(d.solvers.size()));
    if (d.runs.empty()) v.push_back("dataset has no runs");
    if (!(d.cutoff > 0.0)) v.push_back("cutoff must be > 0");

    std::set<std::string_view> solver_ids;
    for (const auto& s : d.solvers) {
        if (!solver_ids.insert(s).second) v.push_back("duplicate solver '" + s + "'");
    }
    std::set<RunKey> run_keys;
    for (const auto& r : d.runs) {
        if (!run_keys.insert(r).second) v.push_back("duplicate run " + to_string(r));
    }

    for (const auto& instance : d.instances()) {
        if (!d.strata.contains(instance)) v.push_back("instance '" + instance + "' has no stratum");
    }

    for (const auto& [key, ref] : d.reference) {
        if (!run_keys.contains(key)) v.push_back("reference for unknown run " + to_string(key));
        if (ref.best_known_quality && !(std::isfinite(*ref.best_known_quality) && *ref.best_known_quality > 0.0)) {
            v.push_back("reference " + to_string(key) + ": best_known_quality must be finite and > 0");
        }
        if (ref.reference_time && !(std::isfinite(*ref.reference_time) && *ref.reference_time > 0.0)) {
            v.push_back("reference " + to_string(key) + ": reference_time must be finite and > 0");
        }
    }

    const std::size_t expected = d.solvers.size() * d.runs.size();
    if (d.results.size() != expected) {
        v.push_back("result table has " + std::to_string(d.results.size()) + " records, expected " +
                    std::to_string(expected));
        return v;
    }

    for (std::size_t s = 0; s < d.solvers.size(); ++s) {
        for (std::size_t r = 0; r < d.runs.size(); ++r) {
            const auto& rec = d.record(s, r);
            const auto who = describe(d.solvers[s], d.runs[r]);
            if (!(std::isfinite(rec.cpu_time) && rec.cpu_time >= 0.0)) {
                v.push_back(who + ": cpu_time must be finite and >= 0");
            }
            if (rec.quality && !(std::isfinite(*rec.quality) && *rec.quality >= 0.0)) {
                v.push_back(who + ": quality must be finite and >= 0");
            }
            if (rec.quality && is_solved_status(rec.status)) {
                const auto* ref = d.reference_for(r);
                if (ref && ref->best_known_quality && *rec.quality < *ref->best_known_quality) {
                    v.push_back(who + ": quality " + detail::format_double(*rec.quality) +
                                " is better than best_known_quality " +
                                detail::format_double(*ref->best_known_quality));
                }
            }
        }
    }
    return v;
}

InputFormat infer_format(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".json" ? InputFormat::json : InputFormat::csv;
}

Dataset parse_dataset(std::string_view results_text, InputFormat format,
                      std::optional<std::string_view> config_text) {
    auto rows = format == InputFormat::csv ? parse_csv_rows(results_text) : parse_json_rows(results_text);
    Dataset d = assemble(std::move(rows));
    if (config_text) apply_config(d, *config_text);
    if (d.strata.empty()) {
        for (const auto& instance : d.instances()) d.strata[instance] = std::string(kDefaultStratum);
    }
    if (auto violations = validate_dataset(d); !violations.empty()) {
        std::ostringstream msg;
        msg << "invalid dataset:";
        for (const auto& line : violations) msg << "\n  " << line;
        throw DataError(msg.str());
    }
    return d;
}

Dataset load_dataset(const std::filesystem::path& results_path, InputFormat format,
                     const std::optional<std::filesystem::path>& config_path) {
    const auto results = detail::read_file(results_path);
    if (!config_path) return parse_dataset(results, format);
    const auto config = detail::read_file(*config_path);
    return parse_dataset(results, format, std::string_view(config));
}

std::string write_results(const Dataset& d, InputFormat format) {
    if (format == InputFormat::csv) {
        std::string out(kCsvHeader);
        out.push_back('\n');
        for (std::size_t s = 0; s < d.solvers.size(); ++s) {
            for (std::size_t r = 0; r < d.runs.size(); ++r) {
                const auto& rec = d.record(s, r);
                out += detail::csv_join({d.solvers[s], d.runs[r].instance_id, std::to_string(d.runs[r].seed),
                                         std::string(to_string(rec.status)), detail::format_double(rec.cpu_time),
                                         rec.quality ? detail::format_double(*rec.quality) : std::string()});
                out.push_back('\n');
            }
        }
        return out;
    }

    json rows = json::array();
    for (std::size_t s = 0; s < d.solvers.size(); ++s) {
        for (std::size_t r = 0; r < d.runs.size(); ++r) {
            const auto& rec = d.record(s, r);
            rows.push_back({{"solver", d.solvers[s]},
                            {"instance", d.runs[r].instance_id},
                            {"seed", d.runs[r].seed},
                            {"status", to_string(rec.status)},
                            {"cpu_time", rec.cpu_time},
                            {"quality", rec.quality ? json(*rec.quality) : json(nullptr)}});
        }
    }
    return json{{"results", std::move(rows)}}.dump(2) + "\n";
}

std::string write_config(const Dataset& d) {
    json doc = json::object();
    if (std::isfinite(d.cutoff)) doc["cutoff_seconds"] = d.cutoff;
    doc["strata"] = d.strata;
    json ref = json::object();
    for (const auto& [key, data] : d.reference) {
        json entry = json::object();
        if (data.best_known_quality) entry["best_known_quality"] = *data.best_known_quality;
        if (data.reference_time) entry["reference_time"] = *data.reference_time;
        ref[to_string(key)] = std::move(entry);
    }
    doc["reference"] = std::move(ref);
    return doc.dump(2) + "\n";
}

}  // namespace rankbench
