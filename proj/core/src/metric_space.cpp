#include "pq/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pq {

double MetricSpace::diameter() const {
    double m = 0.0;
    for (double v : dist) m = std::max(m, v);
    return m;
}

double MetricSpace::max_nn_distance() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            if (j != i) nn = std::min(nn, d(i, j));
        if (n > 1) worst = std::max(worst, nn);
    }
    return worst;
}

MetricSpace MetricSpace::from_points(const std::vector<std::array<double, 2>>& pts) {
    MetricSpace s;
    s.n = static_cast<int>(pts.size());
    s.coords = pts;
    s.dist.assign(static_cast<std::size_t>(s.n) * s.n, 0.0);
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            double v = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            s.d(i, j) = v;
            s.d(j, i) = v;
        }
    s.triangle_certified = true;  // Euclidean by construction
    return s;
}

MetricSpace MetricSpace::from_matrix(int n, std::vector<double> matrix) {
    if (n < 0 || matrix.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("from_matrix: matrix is not n*n");
    MetricSpace s;
    s.n = n;
    s.dist = std::move(matrix);
    return s;
}

SubsetRef SubsetRef::of(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return SubsetRef{std::move(idx)};
}

SubsetRef SubsetRef::full(int n) {
    SubsetRef s;
    s.indices.resize(n);
    std::iota(s.indices.begin(), s.indices.end(), 0);
    return s;
}

SubsetRef SubsetRef::complement(const SubsetRef& s, int n) {
    SubsetRef out;
    out.indices.reserve(n - s.size());
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        if (k < s.indices.size() && s.indices[k] == i)
            ++k;
        else
            out.indices.push_back(i);
    }
    return out;
}

bool SubsetRef::contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

bool SubsetRef::valid_for(int n) const {
    int prev = -1;
    for (int i : indices) {
        if (i <= prev || i < 0 || i >= n) return false;
        prev = i;
    }
    return true;
}

bool Partition::covers_all(int n) const {
    if (static_cast<int>(ground.size()) != n) return false;
    for (int i = 0; i < n; ++i)
        if (ground[i] != i) return false;
    return true;
}

int Partition::class_of_point(int g) const {
    auto it = std::lower_bound(ground.begin(), ground.end(), g);
    if (it == ground.end() || *it != g)
        throw std::invalid_argument("class_of_point: point not in ground set");
    return class_of[it - ground.begin()];
}

Partition Partition::singletons(int n) {
    Partition p;
    p.ground.resize(n);
    std::iota(p.ground.begin(), p.ground.end(), 0);
    p.class_of = p.ground;
    p.classes.resize(n);
    for (int i = 0; i < n; ++i) p.classes[i] = {i};
    return p;
}

Partition Partition::single_class(int n) {
    Partition p;
    p.ground.resize(n);
    std::iota(p.ground.begin(), p.ground.end(), 0);
    p.class_of.assign(n, 0);
    p.classes.resize(1);
    p.classes[0] = p.ground;
    return p;
}

Partition Partition::from_class_of(const std::vector<int>& class_of) {
    const int n = static_cast<int>(class_of.size());
    std::vector<std::vector<int>> groups;
    std::vector<int> remap;  // original class id -> dense id, filled on first sight
    int max_id = -1;
    for (int c : class_of) max_id = std::max(max_id, c);
    remap.assign(max_id + 1, -1);
    for (int i = 0; i < n; ++i) {
        int c = class_of[i];
        if (c < 0) throw std::invalid_argument("from_class_of: negative class id");
        if (remap[c] < 0) {
            remap[c] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[remap[c]].push_back(i);
    }
    return from_classes(std::move(groups));
}

Partition Partition::from_classes(std::vector<std::vector<int>> classes) {
    for (auto& c : classes) {
        std::sort(c.begin(), c.end());
        if (c.empty()) throw std::invalid_argument("from_classes: empty class");
    }
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    Partition p;
    p.classes = std::move(classes);
    for (const auto& c : p.classes) p.ground.insert(p.ground.end(), c.begin(), c.end());
    std::sort(p.ground.begin(), p.ground.end());
    for (std::size_t i = 1; i < p.ground.size(); ++i)
        if (p.ground[i] == p.ground[i - 1])
            throw std::invalid_argument("from_classes: classes overlap");
    p.class_of.assign(p.ground.size(), -1);
    for (int k = 0; k < p.K(); ++k)
        for (int g : p.classes[k]) {
            auto it = std::lower_bound(p.ground.begin(), p.ground.end(), g);
            p.class_of[it - p.ground.begin()] = k;
        }
    return p;
}

void Partition::validate(int n, bool must_cover_all) const {
    if (must_cover_all && !covers_all(n))
        throw std::invalid_argument("partition does not cover all points");
    if (ground.size() != class_of.size())
        throw std::invalid_argument("partition: ground/class_of size mismatch");
    std::size_t total = 0;
    for (int k = 0; k < K(); ++k) {
        if (classes[k].empty()) throw std::invalid_argument("partition: empty class");
        total += classes[k].size();
        for (int g : classes[k]) {
            if (g < 0 || g >= n) throw std::invalid_argument("partition: index out of range");
            if (class_of_point(g) != k)
                throw std::invalid_argument("partition: class_of inconsistent with classes");
        }
    }
    if (total != ground.size())
        throw std::invalid_argument("partition: classes do not cover ground set");
}

ValidationReport validate_metric(const MetricSpace& space, bool check_triangle,
                                 double tri_rel_tol) {
    const int n = space.n;
    if (space.dist.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("validate_metric: matrix is not n*n");
    ValidationReport rep;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = space.d(i, j);
            if (!std::isfinite(v))
                throw std::invalid_argument("validate_metric: non-finite entry");
            if (i == j && v != 0.0)
                rep.issues.push_back({"diagonal", {i, i, -1}, v, 0.0, 0.0});
            if (i < j) {
                if (space.d(j, i) != v)
                    rep.issues.push_back({"symmetry", {i, j, -1}, v, space.d(j, i), 0.0});
                if (v <= 0.0)
                    rep.issues.push_back({"positivity", {i, j, -1}, v, 0.0, 0.0});
            }
        }
    if (check_triangle) {
        const double tau = tri_rel_tol * space.diameter();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dij = space.d(i, j);
                for (int k = 0; k < n; ++k) {
                    double via = dij + space.d(j, k);
                    if (space.d(i, k) > via + tau)
                        rep.issues.push_back({"triangle", {i, j, k}, space.d(i, k), via, tau});
                }
            }
    }
    return rep;
}

double subset_distance(const MetricSpace& space, const SubsetRef& X, const SubsetRef& Y) {
    if (X.empty() || Y.empty())
        throw std::invalid_argument("subset_distance: empty subset");
    double best = std::numeric_limits<double>::infinity();
    for (int x : X.indices)
        for (int y : Y.indices) best = std::min(best, space.d(x, y));
    return best;
}

namespace {

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

}  // namespace

Partition epsilon_components(const MetricSpace& space, const SubsetRef& S, double delta) {
    if (S.empty()) throw std::invalid_argument("epsilon_components: empty subset");
    if (!(delta > 0.0)) throw std::invalid_argument("epsilon_components: delta must be > 0");
    const int m = S.size();
    UnionFind uf(m);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (space.d(S.indices[a], S.indices[b]) <= delta) uf.unite(a, b);
    std::vector<std::vector<int>> groups(m);
    for (int a = 0; a < m; ++a) groups[uf.find(a)].push_back(S.indices[a]);
    std::vector<std::vector<int>> classes;
    for (auto& g : groups)
        if (!g.empty()) classes.push_back(std::move(g));
    return Partition::from_classes(std::move(classes));
}

SubsetRef ball(const MetricSpace& space, int x, double r, bool closed) {
    if (x < 0 || x >= space.n) throw std::invalid_argument("ball: index out of range");
    SubsetRef out;
    for (int j = 0; j < space.n; ++j) {
        double v = space.d(x, j);
        if (closed ? v <= r : v < r) out.indices.push_back(j);
    }
    return out;
}

}  // namespace pq
