#include "pq/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pq/parallel.hpp"

namespace pq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClassGraph class_graph(const MetricSpace& space, const Partition& partition) {
    partition.validate(space.n, /*must_cover_all=*/true);
    const int K = partition.K();
    ClassGraph g;
    g.K = K;
    g.w.assign(static_cast<std::size_t>(K) * K, kInf);
    for (int a = 0; a < K; ++a) g.at(a, a) = 0.0;
    // one sweep over all point pairs
    for (int i = 0; i < space.n; ++i) {
        const int ci = partition.class_of[i];
        for (int j = i + 1; j < space.n; ++j) {
            const int cj = partition.class_of[j];
            if (ci == cj) continue;
            const double v = space.d(i, j);
            if (v < g.at(ci, cj)) {
                g.at(ci, cj) = v;
                g.at(cj, ci) = v;
            }
        }
    }
    return g;
}

namespace {

// Dense Dijkstra from one source over the complete class graph.
void dijkstra_row(const ClassGraph& g, int src, double* out) {
    const int K = g.K;
    std::vector<char> done(K, 0);
    for (int a = 0; a < K; ++a) out[a] = kInf;
    out[src] = 0.0;
    for (int it = 0; it < K; ++it) {
        int u = -1;
        double best = kInf;
        for (int a = 0; a < K; ++a)
            if (!done[a] && out[a] < best) {
                best = out[a];
                u = a;
            }
        if (u < 0) break;
        done[u] = 1;
        const double du = out[u];
        const double* wu = g.w.data() + static_cast<std::size_t>(u) * K;
        for (int v = 0; v < K; ++v) {
            if (done[v]) continue;
            const double cand = du + wu[v];
            if (cand < out[v]) out[v] = cand;
        }
    }
}

// When the underlying metric satisfies the triangle inequality, a chain of
// singleton-class hops never beats the direct hop, so optimal sequences only
// route through the non-singleton classes. Closing over those "hub" classes
// gives the full solution in O(K^2 * H) instead of O(K^3).
std::vector<double> apsp_via_hubs(const ClassGraph& g, const std::vector<int>& hubs) {
    const int K = g.K;
    const int H = static_cast<int>(hubs.size());
    // hub-to-hub closure (Floyd over the hub subset, direct legs allowed)
    std::vector<double> hh(static_cast<std::size_t>(H) * H);
    for (int a = 0; a < H; ++a)
        for (int b = 0; b < H; ++b) hh[a * H + b] = g.at(hubs[a], hubs[b]);
    for (int m = 0; m < H; ++m)
        for (int a = 0; a < H; ++a) {
            const double am = hh[a * H + m];
            if (am == kInf) continue;
            for (int b = 0; b < H; ++b) {
                const double cand = am + hh[m * H + b];
                if (cand < hh[a * H + b]) hh[a * H + b] = cand;
            }
        }
    std::vector<double> out(static_cast<std::size_t>(K) * K);
    parallel_for(K, [&](int a) {
        // best cost from a into each hub (one hop, then hub closure)
        std::vector<double> into(H, kInf);
        for (int h = 0; h < H; ++h) {
            double v = g.at(a, hubs[h]);
            for (int m = 0; m < H; ++m) {
                const double cand = g.at(a, hubs[m]) + hh[m * H + h];
                if (cand < v) v = cand;
            }
            into[h] = v;
        }
        double* row = out.data() + static_cast<std::size_t>(a) * K;
        for (int b = 0; b < K; ++b) {
            double v = g.at(a, b);
            for (int h = 0; h < H; ++h) {
                const double cand = into[h] + g.at(hubs[h], b);
                if (cand < v) v = cand;
            }
            row[b] = v;
        }
    });
    return out;
}

}  // namespace

QuotientPseudoMetric delta_p(const MetricSpace& space, const Partition& partition) {
    ClassGraph g = class_graph(space, partition);
    const int K = g.K;
    QuotientPseudoMetric q;
    q.n = space.n;
    q.partition = partition;
    q.diameter = space.diameter();

    std::vector<int> hubs;
    for (int k = 0; k < K; ++k)
        if (partition.classes[k].size() > 1) hubs.push_back(k);

    if (space.triangle_certified && hubs.size() <= 64) {
        q.class_delta = apsp_via_hubs(g, hubs);
    } else {
        q.class_delta.assign(static_cast<std::size_t>(K) * K, 0.0);
        parallel_for(K, [&](int src) {
            dijkstra_row(g, src, q.class_delta.data() + static_cast<std::size_t>(src) * K);
        });
    }
    // both directions agree up to summation order; pin the lower-index row
    for (int a = 0; a < K; ++a)
        for (int b = a + 1; b < K; ++b)
            q.class_delta[static_cast<std::size_t>(b) * K + a] =
                q.class_delta[static_cast<std::size_t>(a) * K + b];
    return q;
}

std::vector<double> QuotientPseudoMetric::dense() const {
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = at(i, j);
    return m;
}

namespace {

void oracle_extend(const ClassGraph& g, std::vector<char>& used, int last, int target,
                   double cost, double& best) {
    if (cost >= best) return;
    const double direct = cost + g.at(last, target);
    if (direct < best) best = direct;
    for (int c = 0; c < g.K; ++c) {
        if (used[c] || c == target) continue;
        used[c] = 1;
        oracle_extend(g, used, c, target, cost + g.at(last, c), best);
        used[c] = 0;
    }
}

}  // namespace

std::vector<double> delta_p_oracle(const MetricSpace& space, const Partition& partition,
                                   int max_classes) {
    const int K = partition.K();
    if (K > max_classes)
        throw CapacityError("delta_p_oracle: " + std::to_string(K) +
                            " classes exceeds the simple-sequence enumeration budget (" +
                            std::to_string(max_classes) + "); use delta_p");
    ClassGraph g = class_graph(space, partition);
    std::vector<double> cls(static_cast<std::size_t>(K) * K, 0.0);
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) {
            if (a == b) continue;
            double best = kInf;
            std::vector<char> used(K, 0);
            used[a] = 1;
            oracle_extend(g, used, a, b, 0.0, best);
            cls[static_cast<std::size_t>(a) * K + b] = best;
        }
    std::vector<double> out(static_cast<std::size_t>(space.n) * space.n);
    for (int i = 0; i < space.n; ++i)
        for (int j = 0; j < space.n; ++j)
            out[static_cast<std::size_t>(i) * space.n + j] =
                cls[static_cast<std::size_t>(partition.class_of[i]) * K +
                    partition.class_of[j]];
    return out;
}

StringWitness string_witness(const ClassGraph& graph, const QuotientPseudoMetric& qpm,
                             int from_class, int to_class) {
    const int K = graph.K;
    StringWitness w;
    w.class_sequence.push_back(from_class);
    int current = from_class;
    // walk toward the target, always taking the smallest-index class whose hop
    // keeps the remaining cost consistent
    for (int guard = 0; guard <= K && current != to_class; ++guard) {
        int next = -1;
        double next_err = kInf;
        for (int c = 0; c < K; ++c) {
            if (c == current) continue;
            const double err = graph.at(current, c) + qpm.at_classes(c, to_class) -
                               qpm.at_classes(current, to_class);
            if (err < next_err) {
                next_err = err;
                next = c;
            }
        }
        if (next < 0) break;
        w.total += graph.at(current, next);
        w.class_sequence.push_back(next);
        current = next;
    }
    return w;
}

MetricSpace QuotientSpace::as_metric_space() const {
    MetricSpace s = MetricSpace::from_matrix(Q.K(), nabla);
    s.triangle_certified = true;  // shortest-path closure
    return s;
}

QuotientSpace quotient_space(const QuotientPseudoMetric& qpm, double tau_merge) {
    if (tau_merge < 0.0) throw std::invalid_argument("quotient_space: tau_merge < 0");
    const int K = qpm.K();
    // merge classes at class_delta <= tau_merge (components of the relation)
    std::vector<int> rep(K);
    std::iota(rep.begin(), rep.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (rep[a] != a) {
            rep[a] = rep[rep[a]];
            a = rep[a];
        }
        return a;
    };
    for (int a = 0; a < K; ++a)
        for (int b = a + 1; b < K; ++b)
            if (qpm.at_classes(a, b) <= tau_merge) {
                int ra = find(a), rb = find(b);
                if (ra != rb) rep[std::max(ra, rb)] = std::min(ra, rb);
            }
    std::vector<std::vector<int>> merged(K);
    for (int a = 0; a < K; ++a) {
        auto& members = qpm.partition.classes[a];
        auto& bucket = merged[find(a)];
        bucket.insert(bucket.end(), members.begin(), members.end());
    }
    std::vector<std::vector<int>> q_classes;
    std::vector<int> group_rep;  // original class id representing each group
    for (int a = 0; a < K; ++a)
        if (!merged[a].empty()) {
            q_classes.push_back(std::move(merged[a]));
            group_rep.push_back(a);
        }
    // canonical order by minimum member
    std::vector<int> order(q_classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return *std::min_element(q_classes[x].begin(), q_classes[x].end()) <
               *std::min_element(q_classes[y].begin(), q_classes[y].end());
    });
    QuotientSpace out;
    std::vector<std::vector<int>> ordered;
    std::vector<int> reps;
    for (int o : order) {
        ordered.push_back(std::move(q_classes[o]));
        reps.push_back(group_rep[o]);
    }
    out.Q = Partition::from_classes(std::move(ordered));
    const int KQ = out.Q.K();
    out.nabla.assign(static_cast<std::size_t>(KQ) * KQ, 0.0);
    for (int a = 0; a < KQ; ++a)
        for (int b = 0; b < KQ; ++b)
            if (a != b) out.nabla[static_cast<std::size_t>(a) * KQ + b] =
                qpm.at_classes(reps[a], reps[b]);
    out.pi.assign(qpm.n, -1);
    for (int k = 0; k < KQ; ++k)
        for (int g : out.Q.classes[k]) out.pi[g] = k;
    return out;
}

PropertyReport verify_pseudometric(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                   double rel_tol) {
    PropertyReport rep;
    rep.name = "pseudometric";
    const int n = qpm.n;
    const int K = qpm.K();
    const double tol = rel_tol * qpm.diameter;
    const auto& cls = qpm.partition.class_of;
    // point-level sweep: zero diagonal, symmetry, domination by d, zero on
    // classes, and class invariance against each class representative
    std::vector<int> rep_of(K);
    for (int k = 0; k < K; ++k) rep_of[k] = qpm.partition.classes[k].front();
    for (int i = 0; i < n; ++i) {
        if (qpm.at(i, i) != 0.0)
            rep.violations.push_back({"zero_diagonal", {i, i, -1}, qpm.at(i, i), 0.0, 0.0});
        const int ri = rep_of[cls[i]];
        for (int j = 0; j < n; ++j) {
            const double v = qpm.at(i, j);
            if (v != qpm.at(j, i))
                rep.violations.push_back({"symmetry", {i, j, -1}, v, qpm.at(j, i), 0.0});
            if (v > space.d(i, j) + tol)
                rep.violations.push_back({"dominated_by_d", {i, j, -1}, v, space.d(i, j), tol});
            if (cls[i] == cls[j] && v != 0.0)
                rep.violations.push_back({"zero_on_class", {i, j, -1}, v, 0.0, 0.0});
            if (qpm.at(ri, j) != v)
                rep.violations.push_back({"class_invariance", {i, ri, j}, v, qpm.at(ri, j), 0.0});
        }
    }
    rep.checked = 2L * n * n;
    // triangle at class level (delta is class-constant, verified above); the
    // full K^3 sweep runs when it fits the budget, otherwise a deterministic
    // stride subsample of class triples
    constexpr long kTripleBudget = 200'000'000;
    long full = static_cast<long>(K) * K * K;
    int stride = 1;
    while (full > kTripleBudget) {
        ++stride;
        const long s = (K + stride - 1) / stride;
        full = s * s * s;
    }
    for (int a = 0; a < K; a += stride)
        for (int b = 0; b < K; b += stride) {
            const double dab = qpm.at_classes(a, b);
            for (int c = 0; c < K; c += stride) {
                if (qpm.at_classes(a, c) > dab + qpm.at_classes(b, c) + tol)
                    rep.violations.push_back({"triangle", {rep_of[a], rep_of[b], rep_of[c]},
                                              qpm.at_classes(a, c),
                                              dab + qpm.at_classes(b, c), tol});
                ++rep.checked;
            }
        }
    if (stride > 1)
        rep.notice = "triangle sweep subsampled with class stride " + std::to_string(stride);
    return rep;
}

void require_f_form(const Partition& partition, const SubsetRef& F, int n) {
    partition.validate(n, /*must_cover_all=*/true);
    for (const auto& c : partition.classes) {
        bool in_f = F.contains(c.front());
        if (in_f) {
            for (int g : c)
                if (!F.contains(g))
                    throw std::invalid_argument("partition is not in F-form: mixed class");
        } else if (c.size() != 1) {
            throw std::invalid_argument(
                "partition is not in F-form: non-singleton class outside F");
        }
    }
}

namespace {

std::vector<double> dist_to_subset(const MetricSpace& space, const SubsetRef& F) {
    std::vector<double> out(space.n, kInf);
    for (int i = 0; i < space.n; ++i)
        for (int f : F.indices) out[i] = std::min(out[i], space.d(i, f));
    return out;
}

}  // namespace

PropertyReport lower_bound_check(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                 const SubsetRef& F, double rel_tol) {
    require_f_form(qpm.partition, F, space.n);
    PropertyReport rep;
    rep.name = "lower_bound";
    if (F.empty()) {
        rep.notice = "F empty: bound reduces to delta >= min(inf, d) with dist(x,F)=inf";
    }
    const double tol = rel_tol * qpm.diameter;
    const auto dF = F.empty() ? std::vector<double>(space.n, kInf) : dist_to_subset(space, F);
    for (int i = 0; i < space.n; ++i)
        for (int j = 0; j < space.n; ++j) {
            const double bound = std::min(std::max(dF[i], dF[j]), space.d(i, j));
            if (qpm.at(i, j) < bound - tol)
                rep.violations.push_back({"lower_bound", {i, j, -1}, qpm.at(i, j), bound, tol});
        }
    rep.checked = static_cast<long>(space.n) * space.n;
    return rep;
}

PropertyReport local_isometry_check(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                    const SubsetRef& F, double rel_tol) {
    require_f_form(qpm.partition, F, space.n);
    PropertyReport rep;
    rep.name = "local_isometry";
    if (F.size() == space.n) {
        rep.notice = "F covers the whole space: no exterior points, vacuous pass";
        return rep;
    }
    const double tol = rel_tol * qpm.diameter;
    if (F.empty()) {
        // every ball is unbounded and delta must equal d globally; one sweep
        // over pairs covers all of them
        rep.notice = "F empty: global isometry sweep";
        for (int i = 0; i < space.n; ++i)
            for (int j = 0; j < space.n; ++j) {
                if (std::abs(qpm.at(i, j) - space.d(i, j)) > tol)
                    rep.violations.push_back(
                        {"local_isometry", {i, i, j}, qpm.at(i, j), space.d(i, j), tol});
                ++rep.checked;
            }
        return rep;
    }
    const auto dF = dist_to_subset(space, F);
    for (int x = 0; x < space.n; ++x) {
        if (F.contains(x)) continue;
        const double radius = dF[x] / 3.0;
        for (int i = 0; i < space.n; ++i) {
            if (space.d(x, i) >= radius) continue;
            for (int j = 0; j < space.n; ++j) {
                if (space.d(x, j) >= radius) continue;
                if (std::abs(qpm.at(i, j) - space.d(i, j)) > tol) {
                    rep.violations.push_back(
                        {"local_isometry", {x, i, j}, qpm.at(i, j), space.d(i, j), tol});
                }
                ++rep.checked;
            }
        }
    }
    return rep;
}

FRestrictedDelta f_restricted_delta(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                    const SubsetRef& F, double rel_tol) {
    require_f_form(qpm.partition, F, space.n);
    if (F.empty()) throw std::invalid_argument("f_restricted_delta: F is empty");
    if (!space.triangle_certified) {
        auto v = validate_metric(space, /*check_triangle=*/true);
        if (!v.ok())
            throw std::invalid_argument(
                "f_restricted_delta: space fails the triangle check; equality may not hold");
    }
    FRestrictedDelta out;
    const int K = qpm.K();
    for (int k = 0; k < K; ++k)
        if (F.contains(qpm.partition.classes[k].front())) out.f_classes.push_back(k);
    const int KF = static_cast<int>(out.f_classes.size());
    // restricted class graph, then Floyd over it
    ClassGraph g = class_graph(space, qpm.partition);
    out.delta_f.assign(static_cast<std::size_t>(KF) * KF, 0.0);
    for (int a = 0; a < KF; ++a)
        for (int b = 0; b < KF; ++b)
            out.delta_f[static_cast<std::size_t>(a) * KF + b] =
                g.at(out.f_classes[a], out.f_classes[b]);
    for (int m = 0; m < KF; ++m)
        for (int a = 0; a < KF; ++a)
            for (int b = 0; b < KF; ++b) {
                const double cand = out.delta_f[static_cast<std::size_t>(a) * KF + m] +
                                    out.delta_f[static_cast<std::size_t>(m) * KF + b];
                if (cand < out.delta_f[static_cast<std::size_t>(a) * KF + b])
                    out.delta_f[static_cast<std::size_t>(a) * KF + b] = cand;
            }
    out.equality.name = "f_restricted_equality";
    const double tol = rel_tol * qpm.diameter;
    for (int a = 0; a < KF; ++a)
        for (int b = 0; b < KF; ++b) {
            const double restricted = out.delta_f[static_cast<std::size_t>(a) * KF + b];
            const double full = qpm.at_classes(out.f_classes[a], out.f_classes[b]);
            if (std::abs(restricted - full) > tol)
                out.equality.violations.push_back(
                    {"f_restricted_equality", {out.f_classes[a], out.f_classes[b], -1},
                     restricted, full, tol});
            ++out.equality.checked;
        }
    return out;
}

PropertyReport separation_check(const QuotientSpace& qspace, const std::vector<int>& f_classes) {
    PropertyReport rep;
    rep.name = "separation";
    if (f_classes.size() < 2) rep.notice = "fewer than two F-classes: vacuous pass";
    for (std::size_t a = 0; a < f_classes.size(); ++a)
        for (std::size_t b = a + 1; b < f_classes.size(); ++b) {
            const double v = qspace.at(f_classes[a], f_classes[b]);
            if (!(v > 0.0))
                rep.violations.push_back(
                    {"separation", {f_classes[a], f_classes[b], -1}, v, 0.0, 0.0});
            ++rep.checked;
        }
    return rep;
}

}  // namespace pq
