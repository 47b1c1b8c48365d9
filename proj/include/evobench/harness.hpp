#pragma once

// Experiment orchestration: repeated runs, sweeps, aggregation, persistence
// and plotting.

#include "evobench/algorithms.hpp"
#include "evobench/backend.hpp"
#include "evobench/core.hpp"
#include "evobench/problems.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evobench {

struct ExperimentSpec {
    std::string algo = "pso";
    Config overrides;
    std::string problem = "sphere";
    std::size_t dim = 0;   // 0 = problem default
    std::size_t n_obj = 0; // 0 = problem default
    std::string transform_path; // CEC2022 shift/rotation file; empty = identity
    std::size_t pop = 100;
    Budget budget = Budget::generations(100);
    std::size_t reps = 15;
    BackendSpec backend;
    std::uint64_t seed = 1;
    std::size_t history_stride = 0; // 0 = automatic
    bool record_diversity = true;

    /// Explicit stride, or 1 up to 1000 generations and ceil(gens / 1000) beyond.
    std::size_t effective_stride() const;
};

struct SeriesPoint {
    std::uint64_t gen = 0;
    std::uint64_t nfe = 0;
    double elapsed_s = 0;
    double quality = 0;   // best fitness (single objective) or IGD
    double diversity = 0; // NaN when not recorded
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<SeriesPoint> series;
    /// generations, nfe, elapsed_s, quality, diversity, plus best_fitness or
    /// igd and hv, and restarts where it applies.
    std::map<std::string, double> final;
};

struct RunSet {
    ExperimentSpec spec;
    std::map<std::string, std::string> metadata;
    std::vector<RunRecord> runs;
};

/// Runs spec.reps independent repetitions on split streams of spec.seed.
/// `clock` defaults to a steady clock.
RunSet run(const ExperimentSpec& spec, Clock* clock = nullptr);

// ---------------------------------------------------------------------------
// Aggregation

struct Stat {
    double mean = 0;
    double std = 0; // population convention
    std::size_t n = 0;
};

/// Two-pass mean and population standard deviation; NaNs are skipped.
Stat mean_std(const std::vector<double>& v);

struct AggregatePoint {
    std::uint64_t gen = 0;
    Stat nfe, elapsed_s, quality, diversity;
};

struct Aggregate {
    std::vector<AggregatePoint> series; // one point per generation seen in any run
    std::map<std::string, Stat> final;
    std::size_t reps = 0;
};

Aggregate aggregate(const std::vector<RunRecord>& records);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Dimension, PopulationSize };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

struct SweepSpec {
    SweepAxis axis = SweepAxis::PopulationSize;
    std::vector<std::size_t> values{16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
    ExperimentSpec base;
    Budget timing_budget = Budget::generations(100);
    Budget throughput_budget = Budget::wall_time(30.0);
    bool timing = true;
    bool throughput = true;
};

struct SweepPoint {
    std::size_t value = 0;
    std::optional<RunSet> timing;     // fixed-generation runs
    std::optional<RunSet> throughput; // fixed-time runs
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;
};

SweepResult run_sweep(const SweepSpec& s, Clock* clock = nullptr);

struct SweepRow {
    std::size_t value = 0;
    Stat runtime_s;      // final elapsed of the timing runs
    Stat timing_quality;
    Stat nfe;            // final NFE of the throughput runs
    Stat throughput_quality;
};

std::vector<SweepRow> sweep_table(const SweepResult& r);

// ---------------------------------------------------------------------------
// Persistence

nlohmann::json to_json(const ExperimentSpec& s);
ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunSet& r);
RunSet run_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepResult& r);
SweepResult sweep_from_json(const nlohmann::json& j);

/// Writes/reads JSON files; failures raise IoError.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Flat table with header gen,nfe,elapsed_s,quality,diversity,rep.
std::string to_csv(const RunSet& r);
/// One row per axis value with the aggregated sweep columns.
std::string sweep_to_csv(const SweepResult& r);
void write_text(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// Plots

enum class PlotKind { QualityVsNfe, RuntimeVsAxis, Convergence, Diversity };

std::string_view to_string(PlotKind k);
PlotKind parse_plot_kind(std::string_view s);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_std; // empty or same length as y
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Deterministic SVG; the root element carries data-xmin/xmax/ymin/ymax
/// attributes with the plotted data's bounding box.
std::string render_svg(const Plot& plot);

Plot plot_from_aggregate(const Aggregate& a, PlotKind kind, const std::string& label);
/// RuntimeVsAxis: timing runtime against the axis value. QualityVsNfe: one point per
/// axis value, fixed-time NFE against final quality.
Plot plot_from_sweep(const SweepResult& r, PlotKind kind);

void emit_plot(const Plot& plot, const std::string& path);

} // namespace evobench
