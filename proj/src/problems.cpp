#include "evobench/problems.hpp"

#include "evobench/dominance.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace evobench {

namespace {

constexpr double kPi = std::numbers::pi;

struct ProblemInfo {
    ProblemId id;
    std::string_view name;
};

constexpr std::array<ProblemInfo, 20> kProblems{{
    {ProblemId::Cec2022F1, "cec2022-f1"}, {ProblemId::Cec2022F2, "cec2022-f2"},
    {ProblemId::Cec2022F3, "cec2022-f3"}, {ProblemId::Cec2022F4, "cec2022-f4"},
    {ProblemId::Cec2022F5, "cec2022-f5"}, {ProblemId::Ackley, "ackley"},
    {ProblemId::Griewank, "griewank"},    {ProblemId::Rosenbrock, "rosenbrock"},
    {ProblemId::Schwefel, "schwefel"},    {ProblemId::Sphere, "sphere"},
    {ProblemId::Dtlz1, "dtlz1"},          {ProblemId::Dtlz2, "dtlz2"},
    {ProblemId::Dtlz3, "dtlz3"},          {ProblemId::Dtlz4, "dtlz4"},
    {ProblemId::Dtlz5, "dtlz5"},          {ProblemId::Dtlz6, "dtlz6"},
    {ProblemId::Dtlz7, "dtlz7"},          {ProblemId::Zdt1, "zdt1"},
    {ProblemId::Zdt2, "zdt2"},            {ProblemId::Zdt3, "zdt3"},
}};

bool is_dtlz(ProblemId id) { return id >= ProblemId::Dtlz1 && id <= ProblemId::Dtlz7; }
bool is_zdt(ProblemId id) { return id >= ProblemId::Zdt1 && id <= ProblemId::Zdt3; }

Bounds default_bounds(ProblemId id, std::size_t dim) {
    switch (id) {
    case ProblemId::Ackley: return Bounds::uniform(dim, -32, 32);
    case ProblemId::Griewank: return Bounds::uniform(dim, -600, 600);
    case ProblemId::Rosenbrock: return Bounds::uniform(dim, -5, 10);
    case ProblemId::Schwefel: return Bounds::uniform(dim, -500, 500);
    case ProblemId::Sphere: return Bounds::uniform(dim, -5.12, 5.12);
    default: break;
    }
    if (is_cec2022(id)) return Bounds::uniform(dim, -100, 100);
    return Bounds::uniform(dim, 0, 1);
}

// ZDT3's front is the image of these f1 intervals.
constexpr std::array<std::array<double, 2>, 5> kZdt3Segments{{
    {0.0, 0.0830015349},
    {0.1822287280, 0.2577623634},
    {0.4093136748, 0.4538821041},
    {0.6183967944, 0.6525117038},
    {0.8233317983, 0.8518328654},
}};

Matrix keep_non_dominated(const Matrix& pts) {
    const auto front = first_front(pts);
    Matrix out(front.size(), pts.cols());
    for (std::size_t i = 0; i < front.size(); ++i) out.row(i) = pts.row(front[i]);
    return out;
}

} // namespace

std::string_view to_string(ProblemId id) {
    for (const auto& p : kProblems) {
        if (p.id == id) return p.name;
    }
    return "unknown";
}

ProblemId parse_problem_id(std::string_view name) {
    for (const auto& p : kProblems) {
        if (p.name == name) return p.id;
    }
    throw UnknownId(fmt::format("unknown problem '{}'", name));
}

const std::vector<ProblemId>& all_problem_ids() {
    static const std::vector<ProblemId> ids = [] {
        std::vector<ProblemId> v;
        for (const auto& p : kProblems) v.push_back(p.id);
        return v;
    }();
    return ids;
}

bool is_cec2022(ProblemId id) { return id <= ProblemId::Cec2022F5; }
bool is_multi_objective(ProblemId id) { return is_dtlz(id) || is_zdt(id); }

// ---------------------------------------------------------------------------

Transform Transform::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return {Vector::Zero(d), Eigen::MatrixXd::Identity(d, d)};
}

Transform Transform::load(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open transform file '{}'", path));
    std::vector<double> values;
    double v = 0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw IoError(fmt::format("transform file '{}': non-numeric token", path));
    const std::size_t need = dim + dim * dim;
    if (values.size() < need) {
        throw IoError(fmt::format("transform file '{}': expected {} values for D={}, found {}", path, need,
                                  dim, values.size()));
    }
    Transform t = identity(dim);
    for (std::size_t i = 0; i < dim; ++i) t.shift[i] = values[i];
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) t.rotation(r, c) = values[dim + r * dim + c];
    }
    return t;
}

std::uint64_t Transform::fingerprint() const {
    std::uint64_t h = fnv1a({reinterpret_cast<const char*>(shift.data()), sizeof(double) * shift.size()});
    return fnv1a({reinterpret_cast<const char*>(rotation.data()), sizeof(double) * rotation.size()}, h);
}

Problem::Problem(ProblemId id, std::size_t dim, std::size_t n_obj, std::optional<Transform> transform)
    : id_(id), dim_(dim), m_(n_obj), transform_(std::move(transform)) {
    if (dim_ == 0) dim_ = is_cec2022(id) ? 20 : 50;
    if (m_ == 0) m_ = is_dtlz(id) ? 3 : (is_zdt(id) ? 2 : 1);

    if (!is_multi_objective(id) && m_ != 1) {
        throw IncompatibleArity(fmt::format("{} is single-objective; got m={}", to_string(id), m_));
    }
    if (is_zdt(id) && m_ != 2) {
        throw IncompatibleArity(fmt::format("{} has exactly 2 objectives; got m={}", to_string(id), m_));
    }
    if (is_dtlz(id) && (m_ < 2 || dim_ < m_)) {
        throw ContractViolation(fmt::format("{}: need 2 <= m <= D (m={}, D={})", to_string(id), m_, dim_));
    }
    if (is_zdt(id) && dim_ < 2) throw ContractViolation("zdt: D must be >= 2");
    if ((id == ProblemId::Rosenbrock || id == ProblemId::Cec2022F2 || id == ProblemId::Cec2022F3) && dim_ < 2) {
        throw ContractViolation(fmt::format("{}: D must be >= 2", to_string(id)));
    }
    if (transform_) {
        if (!is_cec2022(id)) throw ContractViolation("transforms only apply to CEC2022 problems");
        if (static_cast<std::size_t>(transform_->shift.size()) != dim_ ||
            static_cast<std::size_t>(transform_->rotation.rows()) != dim_ ||
            static_cast<std::size_t>(transform_->rotation.cols()) != dim_) {
            throw ContractViolation("transform dimension does not match problem dimension");
        }
    }
    bounds_ = default_bounds(id, dim_);
}

std::string Problem::transform_hash() const {
    if (!is_cec2022(id_)) return "none";
    return hex64((transform_ ? *transform_ : Transform::identity(dim_)).fingerprint());
}

// ---------------------------------------------------------------------------

namespace functions {

double sphere(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double sq = 0, cs = 0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2 * kPi * v);
    }
    const double r = -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
    // exp(1) + 20 - 20 - e can leave a 1 ulp residue at the optimum.
    return std::max(r, 0.0);
}

double griewank(std::span<const double> x) {
    double s = 0, p = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i];
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s / 4000.0 - p;
}

double rosenbrock(std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i] - x[i + 1];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double schwefel(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
    return 418.9829 * static_cast<double>(x.size()) - s;
}

double zakharov(std::span<const double> x) {
    double s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

double schaffer_f7(std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double r = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]);
        const double t = std::sin(50.0 * std::pow(r, 0.2));
        s += std::sqrt(r) + std::sqrt(r) * t * t;
    }
    const double k = static_cast<double>(x.size() - 1);
    return (s / k) * (s / k);
}

double rastrigin(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v - 10.0 * std::cos(2 * kPi * v) + 10.0;
    return s;
}

double levy(std::span<const double> x) {
    const std::size_t n = x.size();
    auto w = [&](std::size_t i) { return 1.0 + x[i] / 4.0; };
    const double s0 = std::sin(kPi * w(0));
    double s = s0 * s0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double wi = w(i);
        const double t = std::sin(kPi * wi + 1.0);
        s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * t * t);
    }
    const double wn = w(n - 1);
    const double t = std::sin(2 * kPi * wn);
    s += (wn - 1.0) * (wn - 1.0) * (1.0 + t * t);
    return s;
}

} // namespace functions

namespace {

// z = R * (scale * (x - shift))
void shift_rotate(const Problem& p, const double* x, double scale, double* y, double* z) {
    const std::size_t d = p.dim();
    const auto& t = p.transform();
    for (std::size_t i = 0; i < d; ++i) y[i] = (x[i] - (t ? t->shift[i] : 0.0)) * scale;
    if (!t) {
        std::copy(y, y + d, z);
        return;
    }
    for (std::size_t r = 0; r < d; ++r) {
        double s = 0;
        for (std::size_t c = 0; c < d; ++c) s += t->rotation(r, c) * y[c];
        z[r] = s;
    }
}

void eval_zdt(ProblemId id, const double* x, std::size_t n, double* f) {
    double tail = 0;
    for (std::size_t i = 1; i < n; ++i) tail += x[i];
    const double g = 1.0 + 9.0 * tail / static_cast<double>(n - 1);
    const double f1 = x[0];
    const double r = f1 / g;
    f[0] = f1;
    switch (id) {
    case ProblemId::Zdt1: f[1] = g * (1.0 - std::sqrt(r)); break;
    case ProblemId::Zdt2: f[1] = g * (1.0 - r * r); break;
    default: f[1] = g * (1.0 - std::sqrt(r) - r * std::sin(10.0 * kPi * f1)); break;
    }
}

double dtlz_g_rastrigin(const double* xm, std::size_t k) {
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = xm[i] - 0.5;
        s += d * d - std::cos(20.0 * kPi * d);
    }
    return 100.0 * (static_cast<double>(k) + s);
}

double dtlz_g_sphere(const double* xm, std::size_t k) {
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += (xm[i] - 0.5) * (xm[i] - 0.5);
    return s;
}

// Spherical front from angles theta[0..m-2] in [0,1] (scaled by pi/2 here).
void sphere_objectives(const double* theta, std::size_t m, double radius, double* f) {
    for (std::size_t i = 0; i < m; ++i) {
        double v = radius;
        for (std::size_t j = 0; j + 1 < m - i; ++j) v *= std::cos(theta[j] * kPi / 2);
        if (i > 0) v *= std::sin(theta[m - i - 1] * kPi / 2);
        f[i] = v;
    }
}

void eval_dtlz(ProblemId id, const double* x, std::size_t n, std::size_t m, double* f, double* theta) {
    const std::size_t k = n - m + 1;
    const double* xm = x + (m - 1);
    switch (id) {
    case ProblemId::Dtlz1: {
        const double g = dtlz_g_rastrigin(xm, k);
        for (std::size_t i = 0; i < m; ++i) {
            double v = 0.5 * (1.0 + g);
            for (std::size_t j = 0; j + 1 < m - i; ++j) v *= x[j];
            if (i > 0) v *= 1.0 - x[m - i - 1];
            f[i] = v;
        }
        return;
    }
    case ProblemId::Dtlz2:
    case ProblemId::Dtlz3:
    case ProblemId::Dtlz4: {
        const double g = id == ProblemId::Dtlz3 ? dtlz_g_rastrigin(xm, k) : dtlz_g_sphere(xm, k);
        for (std::size_t j = 0; j + 1 < m; ++j) theta[j] = id == ProblemId::Dtlz4 ? std::pow(x[j], 100.0) : x[j];
        sphere_objectives(theta, m, 1.0 + g, f);
        return;
    }
    case ProblemId::Dtlz5:
    case ProblemId::Dtlz6: {
        double g = 0;
        if (id == ProblemId::Dtlz5) {
            g = dtlz_g_sphere(xm, k);
        } else {
            for (std::size_t i = 0; i < k; ++i) g += std::pow(xm[i], 0.1);
        }
        theta[0] = x[0];
        for (std::size_t j = 1; j + 1 < m; ++j) theta[j] = (1.0 + 2.0 * g * x[j]) / (2.0 * (1.0 + g));
        sphere_objectives(theta, m, 1.0 + g, f);
        return;
    }
    case ProblemId::Dtlz7: {
        double s = 0;
        for (std::size_t i = 0; i < k; ++i) s += xm[i];
        const double g = 1.0 + 9.0 * s / static_cast<double>(k);
        double h = static_cast<double>(m);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            f[i] = x[i];
            h -= f[i] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * f[i]));
        }
        f[m - 1] = (1.0 + g) * h;
        return;
    }
    default: break;
    }
}

} // namespace

void Problem::evaluate_one(const double* x, double* f, std::vector<double>& scratch) const {
    const std::size_t d = dim_;
    const std::span<const double> xs(x, d);
    switch (id_) {
    case ProblemId::Sphere: f[0] = functions::sphere(xs); return;
    case ProblemId::Ackley: f[0] = functions::ackley(xs); return;
    case ProblemId::Griewank: f[0] = functions::griewank(xs); return;
    case ProblemId::Rosenbrock: f[0] = functions::rosenbrock(xs); return;
    case ProblemId::Schwefel: f[0] = functions::schwefel(xs); return;
    default: break;
    }
    scratch.resize(2 * d);
    double* y = scratch.data();
    double* z = scratch.data() + d;
    const std::span<const double> zs(z, d);
    switch (id_) {
    case ProblemId::Cec2022F1:
        shift_rotate(*this, x, 1.0, y, z);
        f[0] = functions::zakharov(zs);
        return;
    case ProblemId::Cec2022F2:
        shift_rotate(*this, x, 2.048 / 100.0, y, z);
        for (std::size_t i = 0; i < d; ++i) z[i] += 1.0;
        f[0] = functions::rosenbrock(zs);
        return;
    case ProblemId::Cec2022F3:
        shift_rotate(*this, x, 1.0, y, z);
        f[0] = functions::schaffer_f7(zs);
        return;
    case ProblemId::Cec2022F4: {
        // Non-continuous variant: offsets beyond 0.5 snap to the half-integer grid.
        std::vector<double>& xs2 = scratch;
        xs2.resize(3 * d);
        y = xs2.data();
        z = xs2.data() + d;
        double* stepped = xs2.data() + 2 * d;
        for (std::size_t i = 0; i < d; ++i) {
            const double o = transform_ ? transform_->shift[i] : 0.0;
            const double off = x[i] - o;
            stepped[i] = std::abs(off) > 0.5 ? o + std::round(2.0 * off) / 2.0 : x[i];
        }
        shift_rotate(*this, stepped, 5.12 / 100.0, y, z);
        f[0] = functions::rastrigin({z, d});
        return;
    }
    case ProblemId::Cec2022F5:
        shift_rotate(*this, x, 1.0, y, z);
        f[0] = functions::levy(zs);
        return;
    default: break;
    }
    if (is_zdt(id_)) {
        eval_zdt(id_, x, d, f);
    } else {
        eval_dtlz(id_, x, d, m_, f, y);
    }
}

void Problem::evaluate_rows(const Matrix& x, Matrix& f, std::size_t first, std::size_t last) const {
    std::vector<double> scratch;
    scratch.reserve(3 * dim_);
    for (std::size_t i = first; i < last; ++i) {
        evaluate_one(x.row(static_cast<Eigen::Index>(i)).data(), f.row(static_cast<Eigen::Index>(i)).data(),
                     scratch);
    }
}

RowVector Problem::evaluate(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw ContractViolation(fmt::format("{}: expected {} variables, got {}", name(), dim_, x.size()));
    }
    RowVector f(m_);
    std::vector<double> scratch;
    evaluate_one(x.data(), f.data(), scratch);
    return f;
}

Matrix evaluate_batch(const Problem& p, const Matrix& x) {
    if (static_cast<std::size_t>(x.cols()) != p.dim()) {
        throw ContractViolation(fmt::format("{}: expected {} columns, got {}", p.name(), p.dim(), x.cols()));
    }
    Matrix f(x.rows(), p.n_obj());
    p.evaluate_rows(x, f, 0, static_cast<std::size_t>(x.rows()));
    return f;
}

// ---------------------------------------------------------------------------

std::size_t default_reference_size(std::size_t m) { return m <= 2 ? 1000 : 990; }

Matrix pareto_front_reference(const Problem& p, std::size_t n_points) {
    const std::size_t m = p.n_obj();
    if (m < 2) {
        throw IncompatibleArity(fmt::format("{} is single-objective; it has no Pareto front", p.name()));
    }
    if (n_points < 2) throw ContractViolation("pareto_front_reference: need at least 2 points");
    const auto n = static_cast<Eigen::Index>(n_points);
    auto linspace = [&](double lo, double hi, Eigen::Index count) {
        return Vector::LinSpaced(count, lo, hi);
    };
    auto lattice_at_least = [&](std::size_t target) {
        std::size_t h = 1;
        while (simplex_lattice_size(m, h) < target) ++h;
        return simplex_lattice(m, h);
    };

    switch (p.id()) {
    case ProblemId::Zdt1:
    case ProblemId::Zdt2: {
        Matrix r(n, 2);
        r.col(0) = linspace(0, 1, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double f1 = r(i, 0);
            r(i, 1) = p.id() == ProblemId::Zdt1 ? 1.0 - std::sqrt(f1) : 1.0 - f1 * f1;
        }
        return r;
    }
    case ProblemId::Zdt3: {
        double total = 0;
        for (const auto& s : kZdt3Segments) total += s[1] - s[0];
        Matrix r(n, 2);
        Eigen::Index row = 0;
        for (std::size_t k = 0; k < kZdt3Segments.size(); ++k) {
            const auto& s = kZdt3Segments[k];
            const Eigen::Index count = k + 1 == kZdt3Segments.size()
                                           ? n - row
                                           : std::max<Eigen::Index>(2, std::llround(n * (s[1] - s[0]) / total));
            const Vector f1 = linspace(s[0], s[1], count);
            for (Eigen::Index i = 0; i < count && row < n; ++i, ++row) {
                r(row, 0) = f1[i];
                r(row, 1) = 1.0 - std::sqrt(f1[i]) - f1[i] * std::sin(10.0 * kPi * f1[i]);
            }
        }
        return keep_non_dominated(r.topRows(row));
    }
    case ProblemId::Dtlz1: {
        if (m == 2) {
            Matrix r(n, 2);
            r.col(0) = linspace(0, 0.5, n);
            r.col(1) = (0.5 - r.col(0).array()).matrix();
            return r;
        }
        return 0.5 * lattice_at_least(n_points);
    }
    case ProblemId::Dtlz2:
    case ProblemId::Dtlz3:
    case ProblemId::Dtlz4: {
        Matrix r;
        if (m == 2) {
            r.resize(n, 2);
            const Vector t = linspace(0, kPi / 2, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                r(i, 0) = std::cos(t[i]);
                r(i, 1) = std::sin(t[i]);
            }
            return r;
        }
        r = lattice_at_least(n_points);
        r.rowwise().normalize();
        return r;
    }
    case ProblemId::Dtlz5:
    case ProblemId::Dtlz6: {
        Matrix r(n, m);
        const Vector t = linspace(0, kPi / 2, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::cos(t[i]);
            const double b = std::sin(t[i]);
            // First m-1 objectives share the same curve coordinate, damped by powers of sqrt(2).
            for (std::size_t j = 0; j + 1 < m; ++j) {
                const double e = j == 0 ? static_cast<double>(m - 2) : static_cast<double>(m - 1 - j);
                r(i, static_cast<Eigen::Index>(j)) = a / std::pow(std::sqrt(2.0), e);
            }
            r(i, static_cast<Eigen::Index>(m - 1)) = b;
        }
        return r;
    }
    case ProblemId::Dtlz7: {
        constexpr double lo1 = 0.0, hi1 = 0.2514118360, lo2 = 0.6316265307, hi2 = 0.8594008566;
        const double median = (hi1 - lo1) / (hi2 - lo2 + hi1 - lo1);
        auto map = [&](double u) {
            return u <= median ? lo1 + u * (hi1 - lo1) / median : lo2 + (u - median) * (hi2 - lo2) / (1 - median);
        };
        // Grid over the first m-1 objectives.
        const std::size_t per_axis = m == 2 ? n_points
                                            : static_cast<std::size_t>(std::ceil(std::pow(
                                                  static_cast<double>(n_points), 1.0 / static_cast<double>(m - 1))));
        std::size_t total = 1;
        for (std::size_t j = 0; j + 1 < m; ++j) total *= per_axis;
        Matrix r(total, m);
        for (std::size_t row = 0; row < total; ++row) {
            std::size_t rem = row;
            double h = static_cast<double>(m);
            for (std::size_t j = 0; j + 1 < m; ++j) {
                const std::size_t idx = rem % per_axis;
                rem /= per_axis;
                const double fj = map(static_cast<double>(idx) / static_cast<double>(per_axis - 1));
                r(row, j) = fj;
                h -= fj / 2.0 * (1.0 + std::sin(3.0 * kPi * fj));
            }
            r(row, m - 1) = 2.0 * h;
        }
        return keep_non_dominated(r);
    }
    default: break;
    }
    throw IncompatibleArity(fmt::format("{} has no Pareto front generator", p.name()));
}

RowVector Problem::front_nadir() const {
    return pareto_front_reference(*this, default_reference_size(m_)).colwise().maxCoeff();
}

} // namespace evobench
