#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpsr/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string operator_name;
    std::string problem_name;
    std::string seed_text;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Config file (key = value lines)");
    cmd->add_option("--operator", flags.operator_name, "Crossover operator: subtree, sbc, msbc");
    cmd->add_option("--problem", flags.problem_name, "Benchmark problem: P1, P2, P3");
    cmd->add_option("--seed", flags.seed_text, "Seed: unsigned integer or 'time'");
    cmd->add_option("--out", flags.out_dir, "Output directory");
}

gpsr::GPConfig effective_config(const CommonFlags& flags) {
    gpsr::GPConfig cfg;
    if (!flags.config_path.empty()) cfg = gpsr::load_config(flags.config_path);
    if (!flags.operator_name.empty()) {
        if (flags.operator_name == "subtree") cfg.op = gpsr::OperatorKind::Subtree;
        else if (flags.operator_name == "sbc") cfg.op = gpsr::OperatorKind::Sbc;
        else if (flags.operator_name == "msbc") cfg.op = gpsr::OperatorKind::Msbc;
        else throw gpsr::ConfigError("unknown operator '" + flags.operator_name +
                                     "' (valid: subtree, sbc, msbc)");
    }
    if (!flags.problem_name.empty()) {
        if (flags.problem_name == "P1") cfg.problem = gpsr::ProblemId::P1;
        else if (flags.problem_name == "P2") cfg.problem = gpsr::ProblemId::P2;
        else if (flags.problem_name == "P3") cfg.problem = gpsr::ProblemId::P3;
        else throw gpsr::ConfigError("unknown problem '" + flags.problem_name +
                                     "' (valid: P1, P2, P3)");
    }
    if (!flags.seed_text.empty()) {
        if (flags.seed_text == "time") {
            cfg.seed = std::nullopt;
        } else {
            std::uint64_t s = 0;
            auto [ptr, ec] = std::from_chars(flags.seed_text.data(),
                                             flags.seed_text.data() + flags.seed_text.size(), s);
            if (ec != std::errc{} || ptr != flags.seed_text.data() + flags.seed_text.size())
                throw gpsr::ConfigError("--seed must be an unsigned integer or 'time'");
            cfg.seed = s;
        }
    }
    cfg.validate();
    return cfg;
}

std::uint64_t master_seed_of(const gpsr::GPConfig& cfg) {
    return cfg.seed.value_or(gpsr::time_seed());
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    return out;
}

int cmd_run(const CommonFlags& flags, bool dump_cases) {
    auto cfg = effective_config(flags);
    cfg.seed = master_seed_of(cfg);
    auto result = gpsr::run(cfg);

    std::filesystem::create_directories(flags.out_dir);
    auto run_path = std::filesystem::path(flags.out_dir) / "run_0.csv";
    {
        auto out = open_out(run_path);
        gpsr::write_run_csv(result, out);
    }
    open_out(std::filesystem::path(flags.out_dir) / "config.txt") << gpsr::config_digest(cfg);
    if (dump_cases) {
        gpsr::Rng rng(result.seed_used);
        auto ctx = gpsr::make_context(cfg, rng);
        auto out = open_out(std::filesystem::path(flags.out_dir) / "cases.csv");
        gpsr::write_cases_csv(ctx.cases, out);
    }

    std::cout << "seed: " << result.seed_used << '\n'
              << "best_fitness: " << gpsr::format_fitness(result.best.fitness) << '\n'
              << "best_found_at: " << result.best_found_at << '\n'
              << "best_tree: " << gpsr::to_text(result.best.genome) << '\n'
              << "wrote: " << run_path.string() << '\n';
    return 0;
}

int cmd_batch(const CommonFlags& flags, int runs) {
    auto cfg = effective_config(flags);
    auto master = master_seed_of(cfg);
    auto report = gpsr::run_batch(cfg, runs, master);
    auto files = gpsr::write_batch_reports(report, flags.out_dir);

    std::cout << "master_seed: " << master << '\n'
              << "runs: " << report.runs.size() << '\n'
              << "best_fitness: " << gpsr::format_fitness(report.summary.best_fitness)
              << " (run " << report.summary.best_run << ", generation "
              << report.summary.best_found_at << ")\n"
              << "median_best_fitness: " << gpsr::format_double(report.summary.median_best) << '\n'
              << "median_best_found_at: "
              << gpsr::format_double(report.summary.median_best_found_at) << '\n'
              << "wrote " << files.size() << " files under " << flags.out_dir << '\n';
    return 0;
}

int cmd_sweep(const CommonFlags& flags, int runs, std::vector<double> ratios) {
    auto cfg = effective_config(flags);
    auto master = master_seed_of(cfg);
    auto rows = gpsr::ratio_sweep(cfg, ratios, runs, master);
    auto files = gpsr::write_sweep_reports(rows, flags.out_dir);

    std::cout << "master_seed: " << master << '\n'
              << "ratio,best_fitness,best_found_at\n";
    for (const auto& row : rows) {
        std::cout << gpsr::format_double(row.ratio) << ','
                  << gpsr::format_fitness(row.best_fitness) << ',' << row.best_found_at << '\n';
    }
    std::cout << "wrote " << files.size() << " files under " << flags.out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genetic programming for symbolic regression: subtree, soft brood,"
                 " and modified soft brood crossover"};
    app.require_subcommand(1);

    CommonFlags run_flags, batch_flags, sweep_flags;
    bool dump_cases = false;
    int batch_runs = 30, sweep_runs = 30;
    std::vector<double> ratios{0.5};

    auto* run_cmd = app.add_subcommand("run", "Execute a single seeded run");
    add_common(run_cmd, run_flags);
    run_cmd->add_flag("--dump-cases", dump_cases, "Also write the fitness cases to cases.csv");

    auto* batch_cmd = app.add_subcommand("batch", "Execute a seeded multi-run batch");
    add_common(batch_cmd, batch_flags);
    batch_cmd->add_option("--runs", batch_runs, "Number of runs")->default_val(30);

    auto* sweep_cmd = app.add_subcommand("sweep", "Switch-ratio sweep (operator forced to msbc)");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--runs", sweep_runs, "Runs per ratio")->default_val(30);
    sweep_cmd->add_option("--ratios", ratios, "Switch ratios in (0,1)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags, dump_cases);
        if (batch_cmd->parsed()) return cmd_batch(batch_flags, batch_runs);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sweep_runs, ratios);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
