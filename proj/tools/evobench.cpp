#include "evobench/harness.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>
#include <thread>

using namespace evobench;

namespace {

enum Exit { kOk = 0, kBadArgs = 2, kArity = 3, kIo = 4 };

struct RunFlags {
    std::string algo = "pso";
    std::string problem = "sphere";
    std::size_t dim = 0;
    std::size_t n_obj = 0;
    std::size_t pop = 100;
    std::string budget = "gen:100";
    std::size_t reps = 15;
    std::string backend = "serial";
    std::size_t workers = 0;
    std::size_t chunk = 0;
    std::uint64_t seed = 1;
    std::size_t stride = 0;
    std::string transform;
    std::vector<std::string> sets;
    bool no_diversity = false;
    std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--algo", f.algo, "Algorithm id (see `evobench list`)");
    cmd->add_option("--problem", f.problem, "Problem id");
    cmd->add_option("--dim", f.dim, "Decision dimension (0 = problem default)");
    cmd->add_option("--n-obj", f.n_obj, "Objective count for DTLZ (0 = default)");
    cmd->add_option("--pop", f.pop, "Population size");
    cmd->add_option("--budget", f.budget, "gen:<n>, fe:<n> or time:<seconds>");
    cmd->add_option("--reps", f.reps, "Independent repetitions");
    cmd->add_option("--backend", f.backend, "serial or parallel")->check(CLI::IsMember({"serial", "parallel"}));
    cmd->add_option("--workers", f.workers, "Worker threads for the parallel backend (0 = hardware)");
    cmd->add_option("--chunk", f.chunk, "Rows per parallel task (0 = automatic)");
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--stride", f.stride, "History stride in generations (0 = automatic)");
    cmd->add_option("--transform", f.transform, "Shift/rotation file for CEC2022 problems");
    cmd->add_option("--set", f.sets, "Algorithm parameter override key=value (repeatable)");
    cmd->add_flag("--no-diversity", f.no_diversity, "Skip the diversity series");
    cmd->add_option("--out", f.out, "Output JSON path")->required();
}

ExperimentSpec to_spec(const RunFlags& f) {
    ExperimentSpec e;
    e.algo = f.algo;
    e.problem = f.problem;
    e.dim = f.dim;
    e.n_obj = f.n_obj;
    e.pop = f.pop;
    e.budget = Budget::parse(f.budget);
    e.reps = f.reps;
    if (f.backend == "parallel") {
        std::size_t w = f.workers;
        if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
        e.backend = BackendSpec::parallel(w, f.chunk);
    }
    e.seed = f.seed;
    e.history_stride = f.stride;
    e.transform_path = f.transform;
    e.record_diversity = !f.no_diversity;
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ContractViolation(fmt::format("--set expects key=value, got '{}'", kv));
        e.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return e;
}

std::vector<std::size_t> parse_values(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (tok.empty() || used != tok.size()) throw ContractViolation(fmt::format("bad sweep value '{}'", tok));
        out.push_back(static_cast<std::size_t>(v));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void print_summary(const RunSet& rs) {
    const Aggregate a = aggregate(rs.runs);
    const auto get = [&](const char* k) { return a.final.count(k) ? a.final.at(k) : Stat{}; };
    std::cout << fmt::format("{} on {} (D={}, M={}, N={}): quality {:.6g} +/- {:.3g}, nfe {:.0f}, {:.3f} s over {} reps\n",
                             rs.metadata.at("algo"), rs.metadata.at("problem"), rs.metadata.at("dim"),
                             rs.metadata.at("n_obj"), rs.metadata.at("pop"), get("quality").mean, get("quality").std,
                             get("nfe").mean, get("elapsed_s").mean, rs.runs.size());
}

int cmd_list() {
    std::cout << "algorithms:\n";
    for (AlgoId id : all_algo_ids()) {
        std::string defaults;
        for (const auto& [k, v] : default_config(id)) defaults += fmt::format(" {}={}", k, v);
        std::cout << fmt::format("  {:<11} {:<6}{}\n", to_string(id), is_multi_objective(id) ? "multi" : "single",
                                 defaults);
    }
    std::cout << "problems:\n";
    for (ProblemId id : all_problem_ids()) {
        const Problem p(id, 0, 0);
        std::cout << fmt::format("  {:<11} D={} M={}\n", to_string(id), p.dim(), p.n_obj());
    }
    std::cout << "budgets: gen:<n> fe:<n> time:<seconds>\n";
    std::cout << "report kinds: quality_vs_nfe runtime_vs_axis convergence diversity\n";
    return kOk;
}

int cmd_report(const std::string& in, const std::string& kind_text, const std::string& format, const std::string& out) {
    const auto j = read_json(in);
    const std::string kind = j.value("kind", std::string("runs"));
    if (kind == "sweep") {
        const SweepResult r = sweep_from_json(j);
        if (format == "csv") {
            write_text(out, sweep_to_csv(r));
        } else {
            emit_plot(plot_from_sweep(r, parse_plot_kind(kind_text)), out);
        }
        return kOk;
    }
    const RunSet rs = run_set_from_json(j);
    if (format == "csv") {
        write_text(out, to_csv(rs));
        return kOk;
    }
    const PlotKind pk = parse_plot_kind(kind_text);
    if (pk == PlotKind::RuntimeVsAxis) throw ContractViolation("runtime_vs_axis needs a sweep result file");
    const std::string label = fmt::format("{} N={}", rs.spec.algo, rs.spec.pop);
    emit_plot(plot_from_aggregate(aggregate(rs.runs), pk, label), out);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for evolutionary algorithms"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run repeated experiments and write a JSON record");
    add_run_flags(run_cmd, run_flags);

    RunFlags sweep_flags;
    std::string axis = "pop";
    std::string values = "16,32,64,128,256,512,1024,2048,4096,8192";
    std::string timing_budget = "gen:100";
    std::string throughput_budget = "time:30";
    bool no_timing = false, no_throughput = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep dimension or population size");
    add_run_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--axis", axis, "dim or pop")->check(CLI::IsMember({"dim", "pop"}));
    sweep_cmd->add_option("--values", values, "Comma separated, strictly increasing");
    sweep_cmd->add_option("--timing-budget", timing_budget, "Budget of the timing experiment");
    sweep_cmd->add_option("--throughput-budget", throughput_budget, "Budget of the throughput experiment");
    sweep_cmd->add_flag("--no-timing", no_timing, "Skip the timing experiment");
    sweep_cmd->add_flag("--no-throughput", no_throughput, "Skip the throughput experiment");

    std::string in, kind = "convergence", format = "svg", out;
    auto* report_cmd = app.add_subcommand("report", "Render a CSV table or SVG plot from a JSON record");
    report_cmd->add_option("--in", in, "Input JSON")->required();
    report_cmd->add_option("--kind", kind, "quality_vs_nfe, runtime_vs_axis, convergence or diversity");
    report_cmd->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
    report_cmd->add_option("--out", out, "Output path")->required();

    app.add_subcommand("list", "List algorithms, problems and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArgs;
    }

    try {
        if (run_cmd->parsed()) {
            const RunSet rs = run(to_spec(run_flags));
            write_json(run_flags.out, to_json(rs));
            print_summary(rs);
            return kOk;
        }
        if (sweep_cmd->parsed()) {
            SweepSpec s;
            s.base = to_spec(sweep_flags);
            s.axis = parse_sweep_axis(axis);
            s.values = parse_values(values);
            s.timing_budget = Budget::parse(timing_budget);
            s.throughput_budget = Budget::parse(throughput_budget);
            s.timing = !no_timing;
            s.throughput = !no_throughput;
            const SweepResult r = run_sweep(s);
            write_json(sweep_flags.out, to_json(r));
            std::cout << sweep_to_csv(r);
            return kOk;
        }
        if (report_cmd->parsed()) return cmd_report(in, kind, format, out);
        return cmd_list();
    } catch (const IncompatibleArity& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kArity;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed record: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
