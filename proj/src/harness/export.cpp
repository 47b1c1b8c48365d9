#include "evobench/harness.hpp"

#include <fmt/core.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace evobench {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

double num(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json backend_json(const BackendSpec& b) {
    return {{"kind", b.kind == BackendKind::Serial ? "serial" : "parallel"}, {"workers", b.workers}, {"chunk", b.chunk}};
}

BackendSpec backend_from(const json& j) {
    BackendSpec b;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "serial") {
        b.kind = BackendKind::Serial;
    } else if (kind == "parallel") {
        b.kind = BackendKind::Parallel;
    } else {
        throw ContractViolation(fmt::format("unknown backend kind '{}'", kind));
    }
    b.workers = j.at("workers").get<std::size_t>();
    b.chunk = j.at("chunk").get<std::size_t>();
    return b;
}

// NaN has no JSON literal; it is written as null and read back as NaN.
json jnum(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

std::string csv_num(double v) { return std::isnan(v) ? std::string() : fmt::format("{}", v); }

} // namespace

json to_json(const ExperimentSpec& s) {
    return {{"algo", s.algo},
            {"overrides", s.overrides},
            {"problem", s.problem},
            {"dim", s.dim},
            {"n_obj", s.n_obj},
            {"transform", s.transform_path},
            {"pop", s.pop},
            {"budget", s.budget.to_string()},
            {"reps", s.reps},
            {"backend", backend_json(s.backend)},
            {"seed", s.seed},
            {"history_stride", s.history_stride},
            {"record_diversity", s.record_diversity}};
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec s;
    s.algo = j.at("algo").get<std::string>();
    s.overrides = j.at("overrides").get<Config>();
    s.problem = j.at("problem").get<std::string>();
    s.dim = j.at("dim").get<std::size_t>();
    s.n_obj = j.at("n_obj").get<std::size_t>();
    s.transform_path = j.at("transform").get<std::string>();
    s.pop = j.at("pop").get<std::size_t>();
    s.budget = Budget::parse(j.at("budget").get<std::string>());
    s.reps = j.at("reps").get<std::size_t>();
    s.backend = backend_from(j.at("backend"));
    s.seed = j.at("seed").get<std::uint64_t>();
    s.history_stride = j.at("history_stride").get<std::size_t>();
    s.record_diversity = j.at("record_diversity").get<bool>();
    return s;
}

json to_json(const RunSet& r) {
    json runs = json::array();
    for (const auto& run : r.runs) {
        json series = json::array();
        for (const auto& pt : run.series) {
            series.push_back({{"gen", pt.gen},
                              {"nfe", pt.nfe},
                              {"elapsed_s", jnum(pt.elapsed_s)},
                              {"quality", jnum(pt.quality)},
                              {"diversity", jnum(pt.diversity)}});
        }
        json final = json::object();
        for (const auto& [k, v] : run.final) final[k] = jnum(v);
        runs.push_back({{"seed", run.seed}, {"stream_id", run.stream_id}, {"series", series}, {"final", final}});
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "runs"},
            {"spec", to_json(r.spec)},
            {"metadata", r.metadata},
            {"runs", runs}};
}

RunSet run_set_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw ContractViolation("unsupported schema_version");
    RunSet r;
    r.spec = spec_from_json(j.at("spec"));
    if (j.contains("metadata")) r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    for (const auto& jr : j.at("runs")) {
        RunRecord rec;
        rec.seed = jr.at("seed").get<std::uint64_t>();
        rec.stream_id = jr.value("stream_id", std::uint64_t{0});
        for (const auto& jp : jr.at("series")) {
            SeriesPoint pt;
            pt.gen = jp.at("gen").get<std::uint64_t>();
            pt.nfe = jp.at("nfe").get<std::uint64_t>();
            pt.elapsed_s = num(jp.at("elapsed_s"));
            pt.quality = num(jp.at("quality"));
            pt.diversity = num(jp.at("diversity"));
            rec.series.push_back(pt);
        }
        for (const auto& [k, v] : jr.at("final").items()) rec.final[k] = num(v);
        r.runs.push_back(std::move(rec));
    }
    return r;
}

json to_json(const SweepResult& r) {
    json points = json::array();
    for (const auto& pt : r.points) {
        points.push_back({{"value", pt.value},
                          {"timing", pt.timing ? to_json(*pt.timing) : json(nullptr)},
                          {"throughput", pt.throughput ? to_json(*pt.throughput) : json(nullptr)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "sweep"},
            {"axis", std::string(to_string(r.spec.axis))},
            {"values", r.spec.values},
            {"spec", to_json(r.spec.base)},
            {"timing_budget", r.spec.timing_budget.to_string()},
            {"throughput_budget", r.spec.throughput_budget.to_string()},
            {"timing", r.spec.timing},
            {"throughput", r.spec.throughput},
            {"points", points}};
}

SweepResult sweep_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw ContractViolation("unsupported schema_version");
    SweepResult r;
    r.spec.axis = parse_sweep_axis(j.at("axis").get<std::string>());
    r.spec.values = j.at("values").get<std::vector<std::size_t>>();
    r.spec.base = spec_from_json(j.at("spec"));
    r.spec.timing_budget = Budget::parse(j.at("timing_budget").get<std::string>());
    r.spec.throughput_budget = Budget::parse(j.at("throughput_budget").get<std::string>());
    r.spec.timing = j.at("timing").get<bool>();
    r.spec.throughput = j.at("throughput").get<bool>();
    for (const auto& jp : j.at("points")) {
        SweepPoint pt;
        pt.value = jp.at("value").get<std::size_t>();
        if (!jp.at("timing").is_null()) pt.timing = run_set_from_json(jp.at("timing"));
        if (!jp.at("throughput").is_null()) pt.throughput = run_set_from_json(jp.at("throughput"));
        r.points.push_back(std::move(pt));
    }
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
    out << text;
    out.close();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
    }
}

std::string to_csv(const RunSet& r) {
    std::string out = "gen,nfe,elapsed_s,quality,diversity,rep\n";
    for (std::size_t rep = 0; rep < r.runs.size(); ++rep) {
        for (const auto& pt : r.runs[rep].series) {
            out += fmt::format("{},{},{},{},{},{}\n", pt.gen, pt.nfe, csv_num(pt.elapsed_s), csv_num(pt.quality),
                               csv_num(pt.diversity), rep);
        }
    }
    return out;
}

std::string sweep_to_csv(const SweepResult& r) {
    std::string out = fmt::format(
        "{},runtime_mean_s,runtime_std_s,timing_quality_mean,timing_quality_std,nfe_mean,nfe_std,"
        "throughput_quality_mean,throughput_quality_std\n",
        to_string(r.spec.axis));
    for (const auto& row : sweep_table(r)) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.value, csv_num(row.runtime_s.mean),
                           csv_num(row.runtime_s.std), csv_num(row.timing_quality.mean),
                           csv_num(row.timing_quality.std), csv_num(row.nfe.mean), csv_num(row.nfe.std),
                           csv_num(row.throughput_quality.mean), csv_num(row.throughput_quality.std));
    }
    return out;
}

} // namespace evobench
