#include "pq/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pq/parallel.hpp"

namespace pq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<int> global_components(const MetricSpace& space, double delta) {
    UnionFind uf(space.n);
    for (int i = 0; i < space.n; ++i)
        for (int j = i + 1; j < space.n; ++j)
            if (space.d(i, j) <= delta) uf.unite(i, j);
    std::vector<int> comp(space.n);
    for (int i = 0; i < space.n; ++i) comp[i] = uf.find(i);
    return comp;
}

}  // namespace

void CongestionParams::validate() const {
    if (!(r > 0.0)) throw std::invalid_argument("congestion: r must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("congestion: delta must be > 0");
    if (R > 0.0 && !(r < R)) throw std::invalid_argument("congestion: need r < R");
    if (R > 0.0 && !(delta <= R)) throw std::invalid_argument("congestion: need delta <= R");
}

CongestionParams default_scales(const MetricSpace& space) {
    ScalePolicy policy;
    return policy.resolve(space);
}

CongestionParams ScalePolicy::resolve(const MetricSpace& space) const {
    CongestionParams p;
    p.delta = explicit_delta ? *explicit_delta : 2.0 * space.max_nn_distance();
    p.r = r_over_delta * p.delta;
    p.R = R_over_delta > 0.0 ? R_over_delta * p.delta : 0.0;  // 0 = unbounded
    p.kappa_thin = kappa_thin;
    p.coarse = coarse;
    return p;
}

CongestionResult congestion_set(const MetricSpace& space, const CongestionParams& params) {
    params.validate();
    const int n = space.n;
    const double r = params.r;
    const double delta = params.delta;
    const double h0 = space.max_nn_distance();
    const double own_cap =
        params.kappa_thin > 0.0 ? params.kappa_thin * (2.0 * r / h0 + 1.0) : kInf;
    const bool unbounded = params.R <= 0.0 || params.R >= space.diameter();

    CongestionResult out;
    const auto comp = global_components(space, delta);
    {
        std::vector<int> roots(comp);
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        out.delta_component_count = static_cast<int>(roots.size());
        out.delta_graph_connected = out.delta_component_count == 1;
        if (!out.delta_graph_connected)
            out.warning = "delta-graph has " + std::to_string(out.delta_component_count) +
                          " components at delta=" + std::to_string(delta);
    }

    std::vector<char> flagged(n, 0);
    if (unbounded) {
        std::vector<int> comp2;
        if (params.coarse > 1.0) comp2 = global_components(space, params.coarse * delta);
        parallel_for(n, [&](int x) {
            bool foreign = false, foreign_coarse = params.coarse <= 1.0;
            long own = 0;
            for (int y = 0; y < n; ++y) {
                if (space.d(x, y) > r) continue;
                if (comp[y] != comp[x])
                    foreign = true;
                else
                    ++own;
                if (params.coarse > 1.0 && comp2[y] != comp2[x]) foreign_coarse = true;
            }
            flagged[x] = foreign && foreign_coarse && own <= own_cap;
        });
    } else {
        parallel_for(n, [&](int x) {
            std::vector<int> members;
            for (int y = 0; y < n; ++y)
                if (space.d(x, y) <= params.R) members.push_back(y);
            const int m = static_cast<int>(members.size());
            int px = static_cast<int>(
                std::lower_bound(members.begin(), members.end(), x) - members.begin());
            auto in_component = [&](double dl) {
                UnionFind uf(m);
                for (int a = 0; a < m; ++a)
                    for (int b = a + 1; b < m; ++b)
                        if (space.d(members[a], members[b]) <= dl) uf.unite(a, b);
                const int root = uf.find(px);
                std::vector<char> inc(m);
                for (int a = 0; a < m; ++a) inc[a] = uf.find(a) == root;
                return inc;
            };
            auto inc = in_component(delta);
            bool foreign = false;
            long own = 0;
            for (int a = 0; a < m; ++a) {
                if (space.d(x, members[a]) > r) continue;
                if (!inc[a])
                    foreign = true;
                else
                    ++own;
            }
            if (foreign && params.coarse > 1.0) {
                auto inc2 = in_component(params.coarse * delta);
                bool fc = false;
                for (int a = 0; a < m; ++a)
                    if (space.d(x, members[a]) <= r && !inc2[a]) fc = true;
                foreign = fc;
            }
            flagged[x] = foreign && own <= own_cap;
        });
    }
    for (int i = 0; i < n; ++i)
        if (flagged[i]) out.points.indices.push_back(i);
    return out;
}

SubsetRef thicken(const MetricSpace& space, const SubsetRef& S, double c) {
    if (c <= 0.0 || S.empty()) return S;
    SubsetRef out;
    for (int i = 0; i < space.n; ++i) {
        double best = kInf;
        for (int s : S.indices) best = std::min(best, space.d(i, s));
        if (best <= c) out.indices.push_back(i);
    }
    return out;
}

CanonicalDecomposition canonical_partition(const MetricSpace& space, const SubsetRef& F,
                                           double delta_F) {
    if (!F.valid_for(space.n))
        throw std::invalid_argument("canonical_partition: invalid subset");
    CanonicalDecomposition out;
    out.N = F;
    out.F = F;
    out.O = SubsetRef::complement(F, space.n);
    std::vector<std::vector<int>> classes;
    if (!F.empty()) {
        out.SF = epsilon_components(space, F, delta_F);
        classes = out.SF.classes;
    }
    for (int o : out.O.indices) classes.push_back({o});
    out.partition = Partition::from_classes(std::move(classes));
    return out;
}

PipelineReport peano_pipeline(const MetricSpace& space, const PipelineConfig& config) {
    PipelineReport rep;
    rep.scales_used = config.scales.resolve(space);
    rep.tau_merge = config.tau_merge;
    rep.collar = config.collar;

    // stage 1: detection (skipped when F comes from the caller)
    SubsetRef N;
    if (config.f_override) {
        N = *config.f_override;
        rep.primary.points = N;
    } else {
        rep.primary = congestion_set(space, rep.scales_used);
        N = rep.primary.points;
        rep.warning = rep.primary.warning;
    }

    // stage 2: hull (optional collar, optional F-dagger exclusion)
    SubsetRef F = thicken(space, N, config.collar);
    if (config.exclude_from_f) {
        std::vector<int> kept;
        for (int i : F.indices)
            if (!config.exclude_from_f->contains(i)) kept.push_back(i);
        F = SubsetRef::of(std::move(kept));
    }

    rep.delta_f = config.delta_f > 0.0 ? config.delta_f : rep.scales_used.delta;
    rep.decomposition = canonical_partition(space, F, rep.delta_f);
    rep.decomposition.N = N;

    // stage 3: quotient
    auto qpm = delta_p(space, rep.decomposition.partition);
    rep.qspace = quotient_space(qpm, config.tau_merge);
    rep.quotient_metric = rep.qspace.as_metric_space();

    // F-side classes in the quotient
    for (int k = 0; k < rep.qspace.Q.K(); ++k)
        if (!F.empty() && F.contains(rep.qspace.Q.classes[k].front()))
            rep.f_image_classes.push_back(k);

    // stage 4: residual congestion on the quotient, scales re-derived there
    rep.residual_scales_used = config.scales.resolve(rep.quotient_metric);
    auto residual = congestion_set(rep.quotient_metric, rep.residual_scales_used);
    rep.residual = residual.points;

    // stage 5: embedded checks
    rep.separation = separation_check(rep.qspace, rep.f_image_classes);
    rep.local_isometry = local_isometry_check(space, qpm, F);
    rep.pseudometric = verify_pseudometric(space, qpm);
    return rep;
}

ResidualCheck residual_congestion_check(const MetricSpace& space, const SubsetRef& f_dagger,
                                        const PipelineConfig& config) {
    auto scales = config.scales.resolve(space);
    auto detected = congestion_set(space, scales);
    std::vector<int> excluded;
    for (int i : detected.points.indices)
        if (!f_dagger.contains(i)) excluded.push_back(i);
    if (excluded.empty())
        throw std::invalid_argument(
            "residual_congestion_check: F-dagger excludes no detected congestion point");
    PipelineConfig cfg = config;
    cfg.f_override = f_dagger;
    ResidualCheck out;
    out.report = peano_pipeline(space, cfg);
    out.excluded = SubsetRef::of(std::move(excluded));
    std::vector<int> images;
    for (int e : out.excluded.indices) images.push_back(out.report.qspace.pi[e]);
    out.excluded_images = SubsetRef::of(std::move(images));
    for (int q : out.report.residual.indices)
        if (out.excluded_images.contains(q)) out.residual_hits_excluded = true;
    return out;
}

}  // namespace pq
