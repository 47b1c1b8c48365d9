#include "evobench/harness.hpp"

#include "evobench/dominance.hpp"
#include "evobench/metrics.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace evobench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Problem build_problem(const ExperimentSpec& spec) {
    const ProblemId pid = parse_problem_id(spec.problem);
    if (spec.transform_path.empty()) return Problem(pid, spec.dim, spec.n_obj);
    const Problem plain(pid, spec.dim, spec.n_obj);
    return Problem(pid, spec.dim, spec.n_obj, Transform::load(spec.transform_path, plain.dim()));
}

RowVector hv_reference_for(const Problem& p) {
    RowVector ref = p.front_nadir();
    for (Eigen::Index j = 0; j < ref.size(); ++j) ref[j] = ref[j] > 0 ? 1.1 * ref[j] : ref[j] + 0.1;
    return ref;
}

std::string join(const RowVector& v) {
    std::string s;
    for (Eigen::Index j = 0; j < v.size(); ++j) s += fmt::format("{}{}", j ? "," : "", v[j]);
    return s;
}

double progress_of(const Budget& b, std::uint64_t gen, std::uint64_t nfe, double elapsed) {
    if (!(b.limit > 0)) return 1.0;
    double used = 0;
    switch (b.kind) {
    case BudgetKind::Generations: used = static_cast<double>(gen); break;
    case BudgetKind::Evaluations: used = static_cast<double>(nfe); break;
    case BudgetKind::WallTime: used = elapsed; break;
    }
    return std::clamp(used / b.limit, 0.0, 1.0);
}

struct Quality {
    const Problem& p;
    bool multi;
    Matrix reference;
    RowVector hv_ref;

    double measure(const Population& pop, double incumbent) const {
        if (!multi) return incumbent;
        const Front nd = first_front(pop.f);
        Matrix front(static_cast<Eigen::Index>(nd.size()), pop.f.cols());
        for (std::size_t i = 0; i < nd.size(); ++i) front.row(static_cast<Eigen::Index>(i)) = pop.f.row(static_cast<Eigen::Index>(nd[i]));
        return igd(front, reference);
    }

    double hv(const Population& pop) const {
        if (!multi || pop.f.cols() > 3) return kNaN;
        return hypervolume(pop.f, hv_ref);
    }
};

RunRecord run_one(const ExperimentSpec& spec, AlgoId aid, const Problem& p, const Quality& q, Backend& backend,
                  const RngStream& stream, Clock& clock) {
    Rng rng(stream);
    auto algo = make_algorithm(aid, p, spec.pop, spec.overrides);
    const std::size_t stride = spec.effective_stride();

    RunRecord rec;
    rec.seed = stream.seed;
    rec.stream_id = stream.stream_id;

    const double t0 = clock.now();
    double overhead = 0;
    std::uint64_t nfe = algo->initialize(backend, rng);
    std::uint64_t gen = 0;
    double incumbent = kInf;
    const auto track = [&] {
        if (!q.multi && algo->population().size() > 0) {
            incumbent = std::min(incumbent, algo->population().f.col(0).minCoeff());
        }
    };
    track();

    double elapsed = clock.now() - t0;
    const auto record = [&] {
        const double start = clock.now();
        const Population& pop = algo->population();
        SeriesPoint pt;
        pt.gen = gen;
        pt.nfe = nfe;
        pt.elapsed_s = elapsed;
        pt.quality = q.measure(pop, incumbent);
        pt.diversity = spec.record_diversity ? diversity(pop.x) : kNaN;
        rec.series.push_back(pt);
        overhead += clock.now() - start;
    };
    record();

    while (!budget_exhausted(spec.budget, gen, nfe, elapsed)) {
        const StepContext ctx{static_cast<std::size_t>(gen), progress_of(spec.budget, gen, nfe, elapsed)};
        nfe += algo->step(backend, rng, ctx);
        ++gen;
        track();
        elapsed = std::max(elapsed, clock.now() - t0 - overhead);
        if (gen % stride == 0) record();
    }
    if (rec.series.back().gen != gen) record();

    const Population& pop = algo->population();
    const SeriesPoint& last = rec.series.back();
    rec.final["generations"] = static_cast<double>(gen);
    rec.final["nfe"] = static_cast<double>(nfe);
    rec.final["elapsed_s"] = last.elapsed_s;
    rec.final["quality"] = last.quality;
    rec.final["diversity"] = last.diversity;
    if (q.multi) {
        rec.final["igd"] = last.quality;
        rec.final["hv"] = q.hv(pop);
    } else {
        rec.final["best_fitness"] = incumbent;
    }
    if (aid == AlgoId::IpopCmaes) rec.final["restarts"] = static_cast<double>(algo->restarts());
    return rec;
}

} // namespace

std::size_t ExperimentSpec::effective_stride() const {
    if (history_stride > 0) return history_stride;
    if (budget.kind == BudgetKind::Generations && budget.limit > 1000) {
        return static_cast<std::size_t>(std::ceil(budget.limit / 1000.0));
    }
    return 1;
}

RunSet run(const ExperimentSpec& spec, Clock* clock) {
    if (spec.reps < 1) throw ContractViolation("reps must be >= 1");
    if (spec.pop < 1) throw ContractViolation("pop must be >= 1");
    const AlgoId aid = parse_algo_id(spec.algo);
    const Problem p = build_problem(spec);
    // Validate arity and configuration before any work is done.
    const Config resolved = make_algorithm(aid, p, spec.pop, spec.overrides)->config();

    SteadyClock steady;
    Clock& clk = clock ? *clock : steady;

    Quality q{p, p.n_obj() >= 2, Matrix(), RowVector()};
    if (q.multi) {
        q.reference = pareto_front_reference(p, default_reference_size(p.n_obj()));
        q.hv_ref = hv_reference_for(p);
    }

    RunSet out;
    out.spec = spec;
    auto& md = out.metadata;
    md["algo"] = std::string(to_string(aid));
    md["problem"] = std::string(p.name());
    md["dim"] = std::to_string(p.dim());
    md["n_obj"] = std::to_string(p.n_obj());
    md["pop"] = std::to_string(spec.pop);
    md["budget"] = spec.budget.to_string();
    md["backend"] = spec.backend.to_string();
    md["workers"] = std::to_string(spec.backend.kind == BackendKind::Parallel ? spec.backend.effective_workers() : 1);
    md["hardware_threads"] = std::to_string(std::thread::hardware_concurrency());
    md["config_hash"] = config_hash(aid, resolved);
    md["transform_hash"] = p.transform_hash();
    md["transform"] = spec.transform_path.empty() ? "identity" : spec.transform_path;
    md["repair"] = "clamp";
    md["timing_includes_init"] = "true";
    md["quality"] = q.multi ? "igd" : "best_fitness";
    md["history_stride"] = std::to_string(spec.effective_stride());
    for (const auto& [k, v] : resolved) md["config." + k] = v;
    if (q.multi) {
        md["igd_reference_points"] = std::to_string(q.reference.rows());
        md["igd_distance"] = "euclidean";
        md["hv_reference"] = join(q.hv_ref);
        md["hv_normalization"] = "none";
    }

    Backend backend(spec.backend);
    const auto streams = split_stream(RngStream{spec.seed, 0}, spec.reps);
    for (const auto& s : streams) out.runs.push_back(run_one(spec, aid, p, q, backend, s, clk));
    return out;
}

// ---------------------------------------------------------------------------

Stat mean_std(const std::vector<double>& v) {
    Stat s;
    double sum = 0;
    for (double x : v) {
        if (std::isnan(x)) continue;
        sum += x;
        ++s.n;
    }
    if (s.n == 0) {
        s.mean = kNaN;
        s.std = kNaN;
        return s;
    }
    s.mean = sum / static_cast<double>(s.n);
    double sq = 0;
    for (double x : v) {
        if (!std::isnan(x)) sq += (x - s.mean) * (x - s.mean);
    }
    s.std = std::sqrt(sq / static_cast<double>(s.n));
    return s;
}

Aggregate aggregate(const std::vector<RunRecord>& records) {
    Aggregate a;
    a.reps = records.size();
    struct Cols {
        std::vector<double> nfe, elapsed, quality, diversity;
    };
    std::map<std::uint64_t, Cols> by_gen;
    std::map<std::string, std::vector<double>> finals;
    for (const auto& r : records) {
        for (const auto& pt : r.series) {
            auto& c = by_gen[pt.gen];
            c.nfe.push_back(static_cast<double>(pt.nfe));
            c.elapsed.push_back(pt.elapsed_s);
            c.quality.push_back(pt.quality);
            c.diversity.push_back(pt.diversity);
        }
        for (const auto& [k, v] : r.final) finals[k].push_back(v);
    }
    for (const auto& [gen, c] : by_gen) {
        a.series.push_back({gen, mean_std(c.nfe), mean_std(c.elapsed), mean_std(c.quality), mean_std(c.diversity)});
    }
    for (const auto& [k, v] : finals) a.final[k] = mean_std(v);
    return a;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SweepAxis a) { return a == SweepAxis::Dimension ? "dim" : "pop"; }

SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "dim") return SweepAxis::Dimension;
    if (s == "pop") return SweepAxis::PopulationSize;
    throw UnknownId(fmt::format("unknown sweep axis '{}' (expected dim or pop)", s));
}

SweepResult run_sweep(const SweepSpec& s, Clock* clock) {
    if (s.values.empty()) throw ContractViolation("sweep needs at least one value");
    for (std::size_t i = 1; i < s.values.size(); ++i) {
        if (s.values[i] <= s.values[i - 1]) throw ContractViolation("sweep values must be strictly increasing");
    }
    if (!s.timing && !s.throughput) throw ContractViolation("sweep has neither timing nor throughput runs");
    SweepResult out;
    out.spec = s;
    for (std::size_t v : s.values) {
        ExperimentSpec e = s.base;
        (s.axis == SweepAxis::Dimension ? e.dim : e.pop) = v;
        SweepPoint pt;
        pt.value = v;
        if (s.timing) {
            e.budget = s.timing_budget;
            pt.timing = run(e, clock);
        }
        if (s.throughput) {
            e.budget = s.throughput_budget;
            pt.throughput = run(e, clock);
        }
        out.points.push_back(std::move(pt));
    }
    return out;
}

std::vector<SweepRow> sweep_table(const SweepResult& r) {
    std::vector<SweepRow> rows;
    const auto finals = [](const RunSet& rs, const char* key) {
        std::vector<double> v;
        for (const auto& run : rs.runs) {
            auto it = run.final.find(key);
            v.push_back(it == run.final.end() ? kNaN : it->second);
        }
        return mean_std(v);
    };
    const Stat none{kNaN, kNaN, 0};
    for (const auto& pt : r.points) {
        SweepRow row;
        row.value = pt.value;
        row.runtime_s = pt.timing ? finals(*pt.timing, "elapsed_s") : none;
        row.timing_quality = pt.timing ? finals(*pt.timing, "quality") : none;
        row.nfe = pt.throughput ? finals(*pt.throughput, "nfe") : none;
        row.throughput_quality = pt.throughput ? finals(*pt.throughput, "quality") : none;
        rows.push_back(row);
    }
    return rows;
}

} // namespace evobench
