#include "pq/continua.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pq {

namespace {

using Point = std::array<double, 2>;

struct Branch {
    std::vector<Point> polyline;
    bool congested = false;  // whether this branch carries truth labels
};

double polyline_length(const std::vector<Point>& p) {
    double L = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i)
        L += std::hypot(p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]);
    return L;
}

// m samples equally spaced in arc length along the polyline (ends included)
std::vector<Point> sample_by_arclength(const std::vector<Point>& p, int m) {
    std::vector<double> cum(p.size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i)
        cum[i] = cum[i - 1] + std::hypot(p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]);
    const double L = cum.back();
    std::vector<Point> out;
    out.reserve(m);
    std::size_t seg = 1;
    for (int k = 0; k < m; ++k) {
        const double target = (m == 1) ? 0.0 : L * k / (m - 1);
        while (seg + 1 < p.size() && cum[seg] < target) ++seg;
        const double t =
            (cum[seg] > cum[seg - 1]) ? (target - cum[seg - 1]) / (cum[seg] - cum[seg - 1]) : 0.0;
        out.push_back({p[seg - 1][0] + t * (p[seg][0] - p[seg - 1][0]),
                       p[seg - 1][1] + t * (p[seg][1] - p[seg - 1][1])});
    }
    return out;
}

// graph of sin(1/x) on [x_min, 1], ordered with x increasing
std::vector<Point> sine_tail_polyline(double x_min) {
    const double u_max = 1.0 / x_min;
    const int count = std::max(100000, static_cast<int>(40000.0 * (u_max - 1.0)));
    std::vector<Point> p(count);
    for (int i = 0; i < count; ++i) {
        const double u = u_max + (1.0 - u_max) * i / (count - 1);  // decreasing u
        p[i] = {1.0 / u, std::sin(u)};
    }
    return p;
}

// x_min such that the truncation gap sits at c_gap times the predicted
// connectivity resolution 2*(total length)/n
double auto_sine_x_min(int n, double c_gap, double closure_len) {
    double x_min = 0.05;
    for (int it = 0; it < 40; ++it) {
        const double L = polyline_length(sine_tail_polyline(x_min)) + 2.0 + closure_len;
        x_min = c_gap * 2.0 * L / n;
    }
    return x_min;
}

GeneratedCorpus assemble(std::string name, int n, std::vector<Branch> branches,
                         std::map<std::string, double> params) {
    std::vector<double> lengths;
    double total = 0.0;
    for (const auto& b : branches) {
        lengths.push_back(polyline_length(b.polyline));
        total += lengths.back();
    }
    std::vector<Point> pts;
    std::vector<int> truth;
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
        int m = std::max(2, static_cast<int>(std::lround(n * lengths[bi] / total)));
        auto sampled = sample_by_arclength(branches[bi].polyline, m);
        for (const auto& pt : sampled) {
            // merge branch-junction duplicates
            bool dup = false;
            for (std::size_t k = 0; k < pts.size() && !dup; ++k)
                if (std::hypot(pts[k][0] - pt[0], pts[k][1] - pt[1]) < 1e-9) dup = true;
            if (dup) continue;
            if (branches[bi].congested) truth.push_back(static_cast<int>(pts.size()));
            pts.push_back(pt);
        }
    }
    GeneratedCorpus c;
    c.space = MetricSpace::from_points(pts);
    c.truth_congested = SubsetRef::of(std::move(truth));
    c.name = std::move(name);
    c.params = std::move(params);
    c.params["n"] = static_cast<double>(n);
    return c;
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void require_budget(int n, int minimum, const std::string& name) {
    if (n < minimum)
        throw BudgetError(name + ": budget n=" + std::to_string(n) +
                          " cannot resolve the finest feature; minimum n is " +
                          std::to_string(minimum));
}

GeneratedCorpus gen_interval(int n, const std::map<std::string, double>& params) {
    require_budget(n, 50, "interval");
    Branch b;
    b.polyline = {{0.0, 0.0}, {1.0, 0.0}};
    return assemble("interval", n, {b}, {});
}

GeneratedCorpus gen_circle(int n, const std::map<std::string, double>& params) {
    require_budget(n, 50, "circle");
    const double radius = param_or(params, "radius", 1.0);
    std::vector<Point> pts(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        pts[i] = {radius * std::cos(t), radius * std::sin(t)};
    }
    GeneratedCorpus c;
    c.space = MetricSpace::from_points(pts);
    c.name = "circle";
    c.params = {{"n", static_cast<double>(n)}, {"radius", radius}};
    return c;
}

GeneratedCorpus gen_topologist_sine(int n, const std::map<std::string, double>& params) {
    require_budget(n, 300, "topologist_sine");
    const double c_gap = param_or(params, "c_gap", 2.1);
    double x_min = param_or(params, "x_min", 0.0);
    if (x_min <= 0.0) {
        x_min = auto_sine_x_min(n, c_gap, 0.0);
    } else {
        const double L = polyline_length(sine_tail_polyline(x_min)) + 2.0;
        const int minimum = static_cast<int>(std::ceil(L / x_min));
        require_budget(n, minimum, "topologist_sine (explicit x_min)");
    }
    Branch segment;
    segment.polyline = {{0.0, -1.0}, {0.0, 1.0}};
    segment.congested = true;
    Branch tail;
    tail.polyline = sine_tail_polyline(x_min);
    return assemble("topologist_sine", n, {segment, tail}, {{"x_min", x_min}});
}

GeneratedCorpus gen_warsaw_circle(int n, const std::map<std::string, double>& params) {
    require_budget(n, 400, "warsaw_circle");
    const double c_gap = param_or(params, "c_gap", 2.1);
    const double y1 = std::sin(1.0);
    std::vector<Point> closure = {{1.0, y1}, {1.3, y1}, {1.3, -1.7}, {0.0, -1.7}, {0.0, -1.0}};
    const double closure_len = polyline_length(closure);
    double x_min = param_or(params, "x_min", 0.0);
    if (x_min <= 0.0) {
        x_min = auto_sine_x_min(n, c_gap, closure_len);
    } else {
        const double L = polyline_length(sine_tail_polyline(x_min)) + 2.0 + closure_len;
        const int minimum = static_cast<int>(std::ceil(L / x_min));
        require_budget(n, minimum, "warsaw_circle (explicit x_min)");
    }
    Branch segment;
    segment.polyline = {{0.0, -1.0}, {0.0, 1.0}};
    segment.congested = true;
    Branch tail;
    tail.polyline = sine_tail_polyline(x_min);
    Branch arc;
    arc.polyline = closure;
    return assemble("warsaw_circle", n, {segment, tail, arc}, {{"x_min", x_min}});
}

GeneratedCorpus gen_comb(int n, const std::map<std::string, double>& params) {
    const int m = static_cast<int>(param_or(params, "teeth", 8.0));
    if (m < 2) throw BudgetError("comb: need at least 2 teeth");
    const double L = 2.0 + m;  // base + spine + m unit teeth
    const int minimum = std::max(50, static_cast<int>(std::ceil(L * m * (m + 1))));
    require_budget(n, minimum, "comb");
    std::vector<Branch> branches;
    Branch base;
    base.polyline = {{0.0, 0.0}, {1.0, 0.0}};
    branches.push_back(base);
    Branch spine;
    spine.polyline = {{0.0, 0.0}, {0.0, 1.0}};
    spine.congested = true;  // labels filtered to y > 0 below via dedupe of (0,0)
    branches.push_back(spine);
    for (int k = 1; k <= m; ++k) {
        Branch tooth;
        tooth.polyline = {{1.0 / k, 0.0}, {1.0 / k, 1.0}};
        branches.push_back(tooth);
    }
    auto corpus = assemble("comb", n, std::move(branches), {{"teeth", static_cast<double>(m)}});
    // drop the base point from the truth locus: congestion is the spine above it
    std::vector<int> truth;
    for (int t : corpus.truth_congested.indices)
        if (corpus.space.coords[t][1] > 0.0) truth.push_back(t);
    corpus.truth_congested = SubsetRef::of(std::move(truth));
    return corpus;
}

GeneratedCorpus gen_cantor_fan(int n, const std::map<std::string, double>& params) {
    const int level = static_cast<int>(param_or(params, "level", 3.0));
    if (level < 1 || level > 8) throw BudgetError("cantor_fan: level must be in [1, 8]");
    // endpoints of the level-m Cantor intervals on [0,1] x {0}
    std::vector<std::pair<double, double>> intervals = {{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : intervals) {
            const double third = (b - a) / 3.0;
            next.push_back({a, a + third});
            next.push_back({b - third, b});
        }
        intervals = std::move(next);
    }
    std::vector<double> targets;
    for (auto [a, b] : intervals) {
        targets.push_back(a);
        targets.push_back(b);
    }
    const Point apex = {0.5, 1.0};
    double L = 0.0;
    for (double t : targets) L += std::hypot(t - apex[0], apex[1]);
    const int minimum =
        std::max(50, static_cast<int>(std::ceil(L * std::pow(3.0, level))));
    require_budget(n, minimum, "cantor_fan");
    std::vector<Branch> branches;
    for (double t : targets) {
        Branch arm;
        arm.polyline = {apex, {t, 0.0}};
        branches.push_back(arm);
    }
    return assemble("cantor_fan", n, std::move(branches),
                    {{"level", static_cast<double>(level)}});
}

GeneratedCorpus gen_harmonic_broom(int n, const std::map<std::string, double>& params) {
    const int m = static_cast<int>(param_or(params, "arcs", 8.0));
    if (m < 2) throw BudgetError("harmonic_broom: need at least 2 arcs");
    double L = std::hypot(1.0, 0.0);
    for (int k = 1; k <= m; ++k) L += std::hypot(1.0, 1.0 / k);
    const int minimum = std::max(50, static_cast<int>(std::ceil(L * m * (m + 1))));
    require_budget(n, minimum, "harmonic_broom");
    std::vector<Branch> branches;
    Branch limit;
    limit.polyline = {{0.0, 0.0}, {1.0, 0.0}};
    limit.congested = true;
    branches.push_back(limit);
    for (int k = 1; k <= m; ++k) {
        Branch arm;
        arm.polyline = {{0.0, 0.0}, {1.0, 1.0 / k}};
        branches.push_back(arm);
    }
    auto corpus =
        assemble("harmonic_broom", n, std::move(branches), {{"arcs", static_cast<double>(m)}});
    // the origin itself is not part of the congested locus
    std::vector<int> truth;
    for (int t : corpus.truth_congested.indices)
        if (corpus.space.coords[t][0] > 0.0) truth.push_back(t);
    corpus.truth_congested = SubsetRef::of(std::move(truth));
    return corpus;
}

}  // namespace

GeneratedCorpus generate(const std::string& name, int n,
                         const std::map<std::string, double>& params) {
    if (name == "interval") return gen_interval(n, params);
    if (name == "circle") return gen_circle(n, params);
    if (name == "topologist_sine") return gen_topologist_sine(n, params);
    if (name == "warsaw_circle") return gen_warsaw_circle(n, params);
    if (name == "comb") return gen_comb(n, params);
    if (name == "cantor_fan") return gen_cantor_fan(n, params);
    if (name == "harmonic_broom") return gen_harmonic_broom(n, params);
    throw UnknownGeneratorError("unknown generator: " + name);
}

std::vector<std::string> generator_names() {
    return {"interval",   "circle",     "topologist_sine", "warsaw_circle",
            "comb",       "cantor_fan", "harmonic_broom"};
}

}  // namespace pq
