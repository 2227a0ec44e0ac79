// cfseq command line: counterfactual action-sequence explanations for RL
// failures. Subcommands mirror the pipeline stages; `run` chains them all.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfseq/config_file.hpp"
#include "cfseq/errors.hpp"
#include "cfseq/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoFailures = 3;
constexpr int kExitInternal = 4;

struct CommonOpts {
    std::string config_path;
    std::string env;
    std::string out_dir;
    std::string methods;
    std::vector<std::string> overrides; // section.key=value
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "run config file (key = value sections)");
    cmd->add_option("--env", opts.env, "environment name override");
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--method,--methods", opts.methods, "comma-separated method list override");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--set", opts.overrides, "extra overrides as section.key=value")
        ->take_all();
}

cfseq::RunConfig resolve_config(const CommonOpts& opts) {
    cfseq::ConfigFile file = opts.config_path.empty()
                                 ? cfseq::ConfigFile::parse_string("")
                                 : cfseq::ConfigFile::parse_file(opts.config_path);
    if (!opts.env.empty()) file.set("run", "env", opts.env);
    if (!opts.out_dir.empty()) file.set("run", "out_dir", opts.out_dir);
    if (!opts.methods.empty()) file.set("run", "methods", opts.methods);
    if (opts.seed_set) file.set("run", "seed", std::to_string(opts.seed));
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw cfseq::ConfigError("--set expects section.key=value, got: " + kv);
        file.set_dotted(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfseq::load_run_config(file);
}

void print_table(const cfseq::ResultsTable& table) {
    std::printf("env: %s, failures explained: %d\n", table.env.c_str(), table.failures_total);
    for (const auto& method : table.methods) {
        const auto& s = table.stats.at(method);
        std::printf("  %-11s generated %6.2f%%  coverage %.3f  empty %d/%d\n", method.c_str(),
                    s.generated_pct, s.diversity.coverage, s.empty_sets, s.failures);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual action-sequence explanations for RL failures"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string report_dir;
    std::string report_format = "markdown";

    auto* train = app.add_subcommand("train", "train the tabular policy");
    auto* collect = app.add_subcommand("collect", "roll out the policy and record failure cases");
    auto* explain = app.add_subcommand("explain", "generate counterfactual sets per failure");
    auto* evaluate = app.add_subcommand("evaluate", "aggregate results and diversity tables");
    auto* report = app.add_subcommand("report", "render a stored run as csv or markdown");
    auto* run = app.add_subcommand("run", "full pipeline: train, collect, explain, evaluate");
    for (auto* cmd : {train, collect, explain, evaluate, run}) add_common(cmd, opts);
    report->add_option("--dir", report_dir, "run directory to render")->required();
    report->add_option("--format", report_format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) {
            const auto fmt = report_format == "csv" ? cfseq::ReportFormat::Csv
                                                    : cfseq::ReportFormat::Markdown;
            std::cout << cfseq::render_report(report_dir, fmt);
            return kExitOk;
        }

        const cfseq::RunConfig cfg = resolve_config(opts);
        if (train->parsed()) {
            cfseq::stage_train(cfg);
            std::printf("wrote %s/policy.json\n", cfg.out_dir.c_str());
        } else if (collect->parsed()) {
            cfseq::stage_train(cfg); // collect needs a policy; keep the stage self-contained
            const auto cases = cfseq::stage_collect(cfg);
            std::printf("collected %zu failure cases -> %s/failures.jsonl\n", cases.size(),
                        cfg.out_dir.c_str());
            if (cases.empty()) {
                std::printf("no failures collected\n");
                return kExitNoFailures;
            }
        } else if (explain->parsed()) {
            cfseq::stage_explain(cfg);
            std::printf("wrote %s/explanations/\n", cfg.out_dir.c_str());
        } else if (evaluate->parsed()) {
            print_table(cfseq::stage_evaluate(cfg));
        } else if (run->parsed()) {
            const auto table = cfseq::run_pipeline(cfg);
            print_table(table);
            if (table.failures_total == 0) {
                std::printf("no failures collected\n");
                return kExitNoFailures;
            }
        }
        return kExitOk;
    } catch (const cfseq::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
}
