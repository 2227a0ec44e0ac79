#include "cfseq/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfseq/baselines.hpp"
#include "cfseq/errors.hpp"

namespace cfseq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << content;
}

struct EnvDefaults {
    int k;
    int population;
    int generations;
    int episodes;
    long train_steps;
    long eps_decay;
    std::vector<std::string> methods;
};

EnvDefaults env_defaults(const std::string& env) {
    if (env == "mini-highway")
        return {5, 50, 5, 1000, 50000, 40000,
                {"highlights", "certain", "uncertain", "local-min", "local-max", "nsga2"}};
    if (env == "mini-farm")
        return {10, 100, 10, 2000, 20000, 15000,
                {"highlights", "certain", "uncertain", "local-min", "local-max", "nsga2"}};
    if (env == "continuous-nav")
        return {5, 50, 5, 200, 0, 0, {"local-min", "nsga2"}};
    throw ConfigError("unknown environment: " + env);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool is_scripted_env(const std::string& env) { return env == "continuous-nav"; }

fs::path policy_path(const RunConfig& cfg) { return fs::path(cfg.out_dir) / "policy.json"; }
fs::path failures_path(const RunConfig& cfg) { return fs::path(cfg.out_dir) / "failures.jsonl"; }

QFunction load_policy(const RunConfig& cfg) {
    const json j = json::parse(read_file(policy_path(cfg)));
    if (j.value("scripted", false))
        throw UnsupportedError("environment uses a scripted controller, not a Q policy");
    return j.get<QFunction>();
}

std::vector<FailureCase> load_failures(const RunConfig& cfg) {
    std::ifstream in(failures_path(cfg));
    if (!in) throw ConfigError("cannot open " + failures_path(cfg).string());
    std::vector<FailureCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        cases.push_back(json::parse(line).get<FailureCase>());
    }
    return cases;
}

/// The deterministic subset of cases the explain/evaluate stages operate on.
std::vector<FailureCase> explained_subset(const RunConfig& cfg, std::vector<FailureCase> cases) {
    std::sort(cases.begin(), cases.end(),
              [](const FailureCase& a, const FailureCase& b) { return a.id < b.id; });
    if (cfg.max_cases > 0 && static_cast<int>(cases.size()) > cfg.max_cases)
        cases.resize(static_cast<std::size_t>(cfg.max_cases));
    return cases;
}

PolicyFn resolve_policy_fn(const RunConfig& cfg, const QFunction* q) {
    if (is_scripted_env(cfg.env)) return scripted_controller(cfg.env);
    if (q == nullptr) throw ConfigError("discrete environment needs a trained policy");
    const QFunction policy = *q;
    return [policy](const State& s) { return Action::of(policy.greedy(s)); };
}

ExplanationSet explain_one(const RunConfig& cfg, const Environment& proto,
                           const FailureCase& c, const std::string& method,
                           const QFunction* policy) {
    const std::uint64_t seed = child_seed(cfg.seed, "cf:" + c.id + ":" + method);
    if (method == "nsga2") {
        NsgaConfig nsga = cfg.nsga;
        nsga.seed = seed;
        return evolve(proto, c, nsga, cfg.props);
    }
    return run_baseline(proto, c, method, policy, cfg.baselines.temperature,
                        cfg.baselines.trials, seed, cfg.props);
}

std::string render_cell(const MethodStats& s, const std::string& metric) {
    if (metric == "failures") return std::to_string(s.failures);
    if (metric == "empty_sets") return std::to_string(s.empty_sets);
    if (metric == "failures_evaluated") return std::to_string(s.diversity.failures_evaluated);
    if (s.failures == 0) return "-"; // no cases: nothing to rate or average
    if (metric == "generated_pct") return fmt6(s.generated_pct);
    if (metric == "coverage") return fmt6(s.diversity.coverage);
    if (metric == "action_diversity") return fmt6(s.diversity.action_diversity);
    if (metric == "cf_property_diversity") return fmt6(s.diversity.cf_property_diversity);
    if (s.nonempty() == 0) return "-"; // no counterfactuals anywhere: no mean to report
    if (metric == "validity") return fmt6(s.mean_validity);
    if (metric == "proximity") return fmt6(s.mean_proximity);
    if (metric == "sparsity") return fmt6(s.mean_sparsity);
    if (metric == "stochastic_certainty") return fmt6(s.mean_certainty);
    if (metric == "recency") return fmt6(s.mean_recency);
    throw InputError("unknown metric: " + metric);
}

const std::vector<std::string> kPropertyMetrics = {
    "failures", "empty_sets", "generated_pct", "validity",
    "proximity", "sparsity",  "stochastic_certainty", "recency"};
const std::vector<std::string> kDiversityMetrics = {
    "coverage", "action_diversity", "cf_property_diversity", "failures_evaluated"};

std::string render_csv(const ResultsTable& table, const std::vector<std::string>& metrics) {
    std::string out = "metric";
    for (const auto& m : table.methods) out += "," + m;
    out += "\n";
    for (const auto& metric : metrics) {
        out += metric;
        for (const auto& m : table.methods) out += "," + render_cell(table.stats.at(m), metric);
        out += "\n";
    }
    return out;
}

void write_results_files(const RunConfig& cfg, const ResultsTable& table) {
    write_file(fs::path(cfg.out_dir) / "results.csv", render_csv(table, kPropertyMetrics));
    write_file(fs::path(cfg.out_dir) / "diversity.csv", render_csv(table, kDiversityMetrics));
}

} // namespace

std::vector<std::string> canonical_methods() {
    std::vector<std::string> out = baseline_names();
    out.push_back("nsga2");
    return out;
}

PolicyFn scripted_controller(const std::string& env_name) {
    if (env_name != "continuous-nav")
        throw UnsupportedError("no scripted controller for environment: " + env_name);
    // Cruise toward the goal at a fixed target speed, obstacle-oblivious.
    return [](const State& s) {
        const double velocity = s.at(1);
        return Action::of(std::vector<double>{std::clamp(1.3 - velocity, -1.0, 1.0)});
    };
}

RunConfig load_run_config(const ConfigFile& file) {
    RunConfig cfg;
    cfg.env = file.get("run", "env", cfg.env);
    const EnvDefaults d = env_defaults(cfg.env); // validates the env name
    cfg.out_dir = file.get("run", "out_dir", cfg.out_dir);
    cfg.seed = file.get_u64("run", "seed", cfg.seed);
    cfg.episodes = static_cast<int>(file.get_long("run", "episodes", d.episodes));
    cfg.k = static_cast<int>(file.get_long("run", "k", d.k));
    cfg.max_cases = static_cast<int>(file.get_long("run", "max_cases", cfg.max_cases));

    const std::string listed = file.get("run", "methods", "");
    cfg.methods = listed.empty() ? d.methods : split_list(listed);
    for (const auto& m : cfg.methods) {
        const auto known = canonical_methods();
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw ConfigError("unknown method: " + m);
    }

    cfg.train.steps = file.get_long("train", "steps", d.train_steps);
    cfg.train.alpha = file.get_double("train", "alpha", cfg.train.alpha);
    cfg.train.gamma = file.get_double("train", "gamma", cfg.train.gamma);
    cfg.train.eps_start = file.get_double("train", "eps_start", cfg.train.eps_start);
    cfg.train.eps_end = file.get_double("train", "eps_end", cfg.train.eps_end);
    cfg.train.eps_decay_steps = file.get_long("train", "eps_decay_steps", d.eps_decay);
    if (cfg.train.eps_start < cfg.train.eps_end || cfg.train.eps_end < 0.0)
        throw ConfigError("exploration schedule needs start >= end >= 0");

    cfg.nsga.population = static_cast<int>(file.get_long("nsga2", "population", d.population));
    cfg.nsga.generations = static_cast<int>(file.get_long("nsga2", "generations", d.generations));
    cfg.nsga.p_mut = file.get_double("nsga2", "p_mut", cfg.nsga.p_mut);
    cfg.nsga.p_cx = file.get_double("nsga2", "p_cx", cfg.nsga.p_cx);
    cfg.nsga.tournament = static_cast<int>(file.get_long("nsga2", "tournament", cfg.nsga.tournament));
    cfg.nsga.sigma = file.get_double("nsga2", "sigma", cfg.nsga.sigma);
    if (cfg.nsga.population < 2 || cfg.nsga.population % 2 != 0)
        throw ConfigError("nsga2 population must be even and >= 2");
    if (cfg.nsga.tournament < 2) throw ConfigError("nsga2 tournament size must be >= 2");

    cfg.baselines.temperature = file.get_double("baselines", "temperature", cfg.baselines.temperature);
    cfg.baselines.trials = static_cast<int>(file.get_long("baselines", "trials", cfg.baselines.trials));

    cfg.props.mc_samples = static_cast<int>(file.get_long("properties", "mc_samples", cfg.props.mc_samples));
    cfg.props.eps = file.get_double("properties", "eps", cfg.props.eps);
    const std::string mode = file.get("properties", "validity", "full-window");
    if (mode == "full-window")
        cfg.props.mode = ValidityMode::FullWindow;
    else if (mode == "terminal")
        cfg.props.mode = ValidityMode::TerminalOnly;
    else
        throw ConfigError("properties.validity must be full-window or terminal");
    if (cfg.props.mc_samples < 1) throw ConfigError("properties.mc_samples must be >= 1");

    for (const auto& [key, value] : file.section("env." + cfg.env)) {
        try {
            cfg.env_params[key] = std::stod(value);
        } catch (const std::exception&) {
            throw ConfigError("[env." + cfg.env + "] " + key + " is not a number");
        }
    }
    return cfg;
}

void stage_train(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    json out;
    if (is_scripted_env(cfg.env)) {
        out = json{{"env", cfg.env}, {"scripted", true}};
    } else {
        const auto proto = make_env(cfg.env, cfg.env_params);
        TrainConfig train = cfg.train;
        train.seed = child_seed(cfg.seed, "train");
        out = train_tabular_q(*proto, train);
    }
    write_file(policy_path(cfg), out.dump() + "\n");
}

std::vector<FailureCase> stage_collect(const RunConfig& cfg) {
    const auto proto = make_env(cfg.env, cfg.env_params);
    PolicyFn policy;
    if (is_scripted_env(cfg.env)) {
        policy = resolve_policy_fn(cfg, nullptr);
    } else {
        const QFunction q = load_policy(cfg);
        policy = resolve_policy_fn(cfg, &q);
    }
    const auto cases =
        collect_failures(*proto, policy, cfg.episodes, cfg.k, child_seed(cfg.seed, "collect"));

    std::string lines;
    for (const auto& c : cases) lines += json(c).dump() + "\n";
    write_file(failures_path(cfg), lines);
    return cases;
}

void stage_explain(const RunConfig& cfg) {
    const auto proto = make_env(cfg.env, cfg.env_params);
    QFunction q;
    const QFunction* q_ptr = nullptr;
    if (!is_scripted_env(cfg.env)) {
        q = load_policy(cfg);
        q_ptr = &q;
    }
    const auto cases = explained_subset(cfg, load_failures(cfg));

    for (const auto& method : cfg.methods) {
        const fs::path dir = fs::path(cfg.out_dir) / "explanations" / method;
        fs::create_directories(dir);
        for (const auto& c : cases) {
            const ExplanationSet set = explain_one(cfg, *proto, c, method, q_ptr);
            write_file(dir / (c.id + ".json"), json(set).dump(2) + "\n");
        }
    }
}

ResultsTable stage_evaluate(const RunConfig& cfg) {
    const auto proto = make_env(cfg.env, cfg.env_params);
    const auto cases = explained_subset(cfg, load_failures(cfg));

    ResultsTable table;
    table.env = cfg.env;
    table.failures_total = static_cast<int>(cases.size());
    for (const auto& m : canonical_methods())
        if (std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end())
            table.methods.push_back(m);

    for (const auto& method : table.methods) {
        MethodStats stats;
        stats.failures = static_cast<int>(cases.size());

        std::vector<ExplanationSet> sets;
        for (const auto& c : cases) {
            const fs::path p = fs::path(cfg.out_dir) / "explanations" / method / (c.id + ".json");
            sets.push_back(json::parse(read_file(p)).get<ExplanationSet>());
        }

        double v = 0, px = 0, sp = 0, ct = 0, rc = 0;
        int nonempty = 0;
        for (const auto& set : sets) {
            if (set.empty()) {
                ++stats.empty_sets;
                continue;
            }
            ++nonempty;
            double sv = 0, spx = 0, ssp = 0, sct = 0, src = 0;
            for (const auto& m : set.members) {
                sv += m.properties.validity;
                spx += m.properties.proximity;
                ssp += m.properties.sparsity;
                sct += m.properties.stochastic_certainty;
                src += m.properties.recency;
            }
            const double n = static_cast<double>(set.size());
            v += sv / n;
            px += spx / n;
            sp += ssp / n;
            ct += sct / n;
            rc += src / n;
        }
        if (!cases.empty())
            stats.generated_pct = 100.0 * static_cast<double>(nonempty) /
                                  static_cast<double>(cases.size());
        if (nonempty > 0) {
            stats.mean_validity = v / nonempty;
            stats.mean_proximity = px / nonempty;
            stats.mean_sparsity = sp / nonempty;
            stats.mean_certainty = ct / nonempty;
            stats.mean_recency = rc / nonempty;
        }
        if (!sets.empty())
            stats.diversity = diversity_report(sets, proto->action_space());
        table.stats[method] = stats;
    }

    write_results_files(cfg, table);
    return table;
}

ResultsTable run_pipeline(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    stage_train(cfg);
    const auto cases = stage_collect(cfg);

    if (cases.empty()) {
        // Legal no-failures outcome: empty tables, no explanations.
        ResultsTable table;
        table.env = cfg.env;
        table.failures_total = 0;
        for (const auto& m : canonical_methods())
            if (std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end())
                table.methods.push_back(m);
        for (const auto& m : table.methods) table.stats[m] = MethodStats{};
        write_results_files(cfg, table);
        write_file(fs::path(cfg.out_dir) / "report.md",
                   "# Run report: " + cfg.env + "\n\nNo failures were collected.\n");
        return table;
    }

    stage_explain(cfg);
    ResultsTable table = stage_evaluate(cfg);
    write_file(fs::path(cfg.out_dir) / "report.md",
               render_report(cfg.out_dir, ReportFormat::Markdown));
    return table;
}

namespace {

struct Grid {
    std::vector<std::string> header; // "metric", then method names
    std::vector<std::vector<std::string>> rows;
};

Grid parse_grid(const std::string& csv) {
    Grid g;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (g.header.empty())
            g.header = std::move(cells);
        else
            g.rows.push_back(std::move(cells));
    }
    return g;
}

std::string metric_label(const std::string& metric) {
    if (metric == "failures") return "Failures";
    if (metric == "empty_sets") return "Empty sets";
    if (metric == "generated_pct") return "Generated counterfactuals (%) (↑)";
    if (metric == "validity") return "Validity (↑)";
    if (metric == "proximity") return "Proximity (↓)";
    if (metric == "sparsity") return "Sparsity (↓)";
    if (metric == "stochastic_certainty") return "Stochastic certainty (↑)";
    if (metric == "recency") return "Recency (↓)";
    if (metric == "coverage") return "Coverage (↑)";
    if (metric == "action_diversity") return "Action diversity (↑)";
    if (metric == "cf_property_diversity") return "CF property diversity (↑)";
    if (metric == "failures_evaluated") return "Failures evaluated";
    return metric;
}

std::string grid_markdown(const Grid& g) {
    std::string out = "| Metric |";
    for (std::size_t i = 1; i < g.header.size(); ++i) out += " " + g.header[i] + " |";
    out += "\n|---|";
    for (std::size_t i = 1; i < g.header.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& row : g.rows) {
        out += "| " + metric_label(row[0]) + " |";
        for (std::size_t i = 1; i < row.size(); ++i) out += " " + row[i] + " |";
        out += "\n";
    }
    return out;
}

} // namespace

std::string render_report(const std::string& results_dir, ReportFormat format) {
    const fs::path dir(results_dir);
    std::vector<std::string> missing;
    for (const char* name : {"results.csv", "diversity.csv"})
        if (!fs::exists(dir / name)) missing.push_back(name);
    if (!missing.empty()) {
        std::string what = "incomplete run directory " + results_dir + "; missing:";
        for (const auto& m : missing) what += " " + m;
        throw ConfigError(what);
    }

    const std::string results_csv = read_file(dir / "results.csv");
    const std::string diversity_csv = read_file(dir / "diversity.csv");
    if (format == ReportFormat::Csv) return results_csv + "\n" + diversity_csv;

    const Grid results = parse_grid(results_csv);
    const Grid diversity = parse_grid(diversity_csv);
    std::string out = "# Run report\n\n## Counterfactual properties\n\n";
    out += grid_markdown(results);
    out += "\n## Diversity\n\n";
    out += grid_markdown(diversity);
    out += "\nDashes mark methods that produced no counterfactuals for any failure.\n";
    return out;
}

} // namespace cfseq
