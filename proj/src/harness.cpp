#include "gpsr/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace gpsr {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void config_fail(const std::filesystem::path& path, int line, const std::string& msg) {
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& value, const std::filesystem::path& path, int line) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        config_fail(path, line, "expected a number, got '" + value + "'");
    return x;
}

int parse_int(const std::string& value, const std::filesystem::path& path, int line) {
    int x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        config_fail(path, line, "expected an integer, got '" + value + "'");
    return x;
}

OperatorKind parse_operator(const std::string& value, const std::filesystem::path& path, int line) {
    if (value == "subtree") return OperatorKind::Subtree;
    if (value == "sbc") return OperatorKind::Sbc;
    if (value == "msbc") return OperatorKind::Msbc;
    config_fail(path, line, "unknown operator '" + value + "' (valid: subtree, sbc, msbc)");
}

ProblemId parse_problem(const std::string& value, const std::filesystem::path& path, int line) {
    if (value == "P1") return ProblemId::P1;
    if (value == "P2") return ProblemId::P2;
    if (value == "P3") return ProblemId::P3;
    config_fail(path, line, "unknown problem '" + value + "' (valid: P1, P2, P3)");
}

}  // namespace

GPConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    GPConfig cfg;
    std::optional<double> sampling_min, sampling_max;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string text = trim(raw);
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string::npos) config_fail(path, line, "expected 'key = value'");
        std::string key = trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (value.empty()) config_fail(path, line, "missing value for key '" + key + "'");

        if (key == "population_size") cfg.population_size = parse_int(value, path, line);
        else if (key == "max_generations") cfg.max_generations = parse_int(value, path, line);
        else if (key == "min_tree_size") cfg.min_tree_size = parse_int(value, path, line);
        else if (key == "max_tree_size") cfg.max_tree_size = parse_int(value, path, line);
        else if (key == "tournament_k") cfg.tournament_k = parse_int(value, path, line);
        else if (key == "crossover_probability") cfg.crossover_probability = parse_real(value, path, line);
        else if (key == "mutation_probability") cfg.mutation_probability = parse_real(value, path, line);
        else if (key == "operator") cfg.op = parse_operator(value, path, line);
        else if (key == "brood_n") cfg.brood.brood_n = parse_int(value, path, line);
        else if (key == "switch_ratio") cfg.brood.switch_ratio = parse_real(value, path, line);
        else if (key == "max_retries") cfg.brood.max_retries = parse_int(value, path, line);
        else if (key == "problem") cfg.problem = parse_problem(value, path, line);
        else if (key == "case_count") cfg.case_count = parse_int(value, path, line);
        else if (key == "sampling_min") sampling_min = parse_real(value, path, line);
        else if (key == "sampling_max") sampling_max = parse_real(value, path, line);
        else if (key == "metric") {
            if (value == "mse") cfg.metric = FitnessMetric::Mse;
            else if (value == "mae") cfg.metric = FitnessMetric::Mae;
            else config_fail(path, line, "unknown metric '" + value + "' (valid: mse, mae)");
        } else if (key == "elite_count") cfg.elite_count = parse_int(value, path, line);
        else if (key == "seed") {
            if (value == "time") cfg.seed = std::nullopt;
            else {
                std::uint64_t s = 0;
                auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
                if (ec != std::errc{} || ptr != value.data() + value.size())
                    config_fail(path, line, "seed must be an unsigned integer or 'time'");
                cfg.seed = s;
            }
        } else {
            config_fail(path, line, "unknown key '" + key + "'");
        }
    }
    if (sampling_min.has_value() != sampling_max.has_value())
        throw ConfigError(path.string() + ": sampling_min and sampling_max must be set together");
    if (sampling_min) cfg.sampling_interval = {*sampling_min, *sampling_max};
    cfg.validate();
    return cfg;
}

std::string config_digest(const GPConfig& cfg) {
    auto spec = cfg.problem_spec();
    std::ostringstream out;
    out << "problem = " << problem_name(cfg.problem) << '\n'
        << "operator = " << operator_name(cfg.op) << '\n'
        << "population_size = " << cfg.population_size << '\n'
        << "max_generations = " << cfg.max_generations << '\n'
        << "min_tree_size = " << cfg.min_tree_size << '\n'
        << "max_tree_size = " << cfg.max_tree_size << '\n'
        << "tournament_k = " << cfg.tournament_k << '\n'
        << "crossover_probability = " << format_double(cfg.crossover_probability) << '\n'
        << "mutation_probability = " << format_double(cfg.mutation_probability) << '\n'
        << "brood_n = " << cfg.brood.brood_n << '\n'
        << "switch_ratio = " << format_double(cfg.brood.switch_ratio) << '\n'
        << "max_retries = " << cfg.brood.max_retries << '\n'
        << "elite_count = " << cfg.elite_count << '\n'
        << "metric = " << (cfg.metric == FitnessMetric::Mse ? "mse" : "mae") << '\n'
        << "case_count = " << spec.case_count << '\n'
        << "sampling_min = " << format_double(spec.sampling_interval.first) << '\n'
        << "sampling_max = " << format_double(spec.sampling_interval.second) << '\n'
        << "seed = " << (cfg.seed ? std::to_string(*cfg.seed) : std::string("time")) << '\n';
    return out.str();
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t run_index) {
    Rng stream(master_seed);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i <= run_index; ++i) s = stream.next_u64();
    return s;
}

namespace {

double fitness_as_real(const Fitness& f) {
    return f.valid ? f.value : std::numeric_limits<double>::infinity();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BatchSummary summarize(const std::vector<RunResult>& runs) {
    BatchSummary summary;
    std::vector<double> bests, found_at;
    bests.reserve(runs.size());
    found_at.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].best.fitness < runs[summary.best_run].best.fitness) summary.best_run = i;
        bests.push_back(fitness_as_real(runs[i].best.fitness));
        found_at.push_back(static_cast<double>(runs[i].best_found_at));
    }
    summary.best_fitness = runs[summary.best_run].best.fitness;
    summary.best_found_at = runs[summary.best_run].best_found_at;
    summary.median_best = median(bests);
    summary.mean_best = std::accumulate(bests.begin(), bests.end(), 0.0) /
                        static_cast<double>(bests.size());
    summary.median_best_found_at = median(std::move(found_at));
    return summary;
}

}  // namespace

BatchReport run_batch(const GPConfig& config, int run_count, std::uint64_t master_seed) {
    if (run_count < 1) throw ConfigError("run_batch: run_count must be >= 1");
    config.validate();
    BatchReport report;
    report.config_digest = config_digest(config);
    Rng stream(master_seed);
    for (int i = 0; i < run_count; ++i) report.seeds.push_back(stream.next_u64());
    report.runs.reserve(static_cast<std::size_t>(run_count));
    for (int i = 0; i < run_count; ++i) {
        GPConfig run_cfg = config;
        run_cfg.seed = report.seeds[static_cast<std::size_t>(i)];
        try {
            report.runs.push_back(run(run_cfg));
        } catch (const std::exception& e) {
            throw ConfigError("run " + std::to_string(i) + " (seed " +
                              std::to_string(*run_cfg.seed) + ") failed: " + e.what());
        }
    }
    report.summary = summarize(report.runs);
    return report;
}

std::vector<SweepRow> ratio_sweep(const GPConfig& base_config, std::span<const double> ratios,
                                  int run_count, std::uint64_t master_seed) {
    std::vector<SweepRow> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw ConfigError("sweep ratio must lie in (0,1), got " + format_double(ratio));
        GPConfig cfg = base_config;
        cfg.op = OperatorKind::Msbc;
        cfg.brood.switch_ratio = ratio;
        SweepRow row;
        row.ratio = ratio;
        row.report = run_batch(cfg, run_count, master_seed);
        row.best_fitness = row.report.summary.best_fitness;
        row.best_found_at = row.report.summary.best_found_at;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_fitness(const Fitness& f) {
    if (!f.valid || !std::isfinite(f.value)) return "inf";
    return format_double(f.value);
}

void write_run_csv(const RunResult& result, std::ostream& out) {
    out << "generation,best_fitness,mean_fitness,best_size,invalid_count\n";
    for (const auto& s : result.stats) {
        out << s.generation << ',' << format_fitness(s.best_fitness) << ','
            << (std::isfinite(s.mean_fitness) ? format_double(s.mean_fitness) : "inf") << ','
            << s.best_size << ',' << s.invalid_count << '\n';
    }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    return out;
}

}  // namespace

std::vector<std::filesystem::path> write_batch_reports(const BatchReport& report,
                                                       const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    auto config_path = out_dir / "config.txt";
    open_out(config_path) << report.config_digest;
    written.push_back(config_path);

    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        auto p = out_dir / ("run_" + std::to_string(i) + ".csv");
        auto out = open_out(p);
        write_run_csv(report.runs[i], out);
        written.push_back(p);
    }

    auto summary_path = out_dir / "summary.csv";
    {
        auto out = open_out(summary_path);
        out << "run_id,seed,best_fitness,best_found_at\n";
        for (std::size_t i = 0; i < report.runs.size(); ++i) {
            out << i << ',' << report.seeds[i] << ','
                << format_fitness(report.runs[i].best.fitness) << ','
                << report.runs[i].best_found_at << '\n';
        }
    }
    written.push_back(summary_path);
    return written;
}

std::vector<std::filesystem::path> write_sweep_reports(std::span<const SweepRow> rows,
                                                       const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    auto sweep_path = out_dir / "sweep.csv";
    {
        auto out = open_out(sweep_path);
        out << "ratio,best_fitness,best_found_at\n";
        for (const auto& row : rows) {
            out << format_double(row.ratio) << ',' << format_fitness(row.best_fitness) << ','
                << row.best_found_at << '\n';
        }
    }
    written.push_back(sweep_path);
    for (const auto& row : rows) {
        auto pct = static_cast<int>(std::llround(row.ratio * 100.0));
        auto sub = out_dir / ("ratio_" + std::to_string(pct));
        auto files = write_batch_reports(row.report, sub);
        written.insert(written.end(), files.begin(), files.end());
    }
    return written;
}

void write_comparison_csv(std::span<const std::string> labels,
                          std::span<const BatchReport> reports, std::ostream& out) {
    out << "operator,best_fitness,median_best_fitness,mean_best_fitness,median_best_found_at\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& s = reports[i].summary;
        out << labels[i] << ',' << format_fitness(s.best_fitness) << ','
            << format_double(s.median_best) << ',' << format_double(s.mean_best) << ','
            << format_double(s.median_best_found_at) << '\n';
    }
}

}  // namespace gpsr
