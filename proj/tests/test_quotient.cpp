#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pq/quotient.hpp"
#include "test_helpers.hpp"

using namespace pq;
using pqtest::Rng;

namespace {

// the worked instance: classes A={1,9}, B={0}, C={10} (point ids 1,2 / 0 / 3)
Partition line_partition() { return Partition::from_classes({{1, 2}, {0}, {3}}); }

}  // namespace

TEST_CASE("class_graph on the worked line instance") {
    auto s = pqtest::line_0_1_9_10();
    auto g = class_graph(s, line_partition());
    REQUIRE(g.K == 3);
    // canonical class order by min element: {0}, {1,9}, {10}
    const int B = 0, A = 1, C = 2;
    CHECK(g.at(A, B) == 1.0);
    CHECK(g.at(A, C) == 1.0);
    CHECK(g.at(B, C) == 10.0);
    CHECK(g.at(A, A) == 0.0);
}

TEST_CASE("class_graph degenerate partitions") {
    auto s = pqtest::line_0_1_9_10();
    auto g = class_graph(s, Partition::singletons(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(g.at(i, j) == s.d(i, j));
    auto g1 = class_graph(s, Partition::single_class(4));
    CHECK(g1.K == 1);
    CHECK(g1.at(0, 0) == 0.0);
}

TEST_CASE("delta_p on the worked line instance") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, line_partition());
    CHECK(q.at(0, 3) == 2.0);   // route through the merged class
    CHECK(q.at(1, 2) == 0.0);   // same class
    CHECK(q.at(0, 1) == 1.0);
    CHECK(q.at(2, 3) == 1.0);
}

TEST_CASE("delta_p with singleton partition equals d on a triangle space") {
    Rng rng(31);
    auto s = pqtest::random_cloud(rng, 25);
    auto q = delta_p(s, Partition::singletons(s.n));
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) CHECK(q.at(i, j) == s.d(i, j));
}

TEST_CASE("delta_p with a single class is identically zero") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, Partition::single_class(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(q.at(i, j) == 0.0);
    auto qs = quotient_space(q, 0.0);
    CHECK(qs.Q.K() == 1);
}

TEST_CASE("delta_p_oracle agrees on the worked instance and small cases") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, line_partition());
    auto oracle = delta_p_oracle(s, line_partition());
    auto dense = q.dense();
    for (std::size_t i = 0; i < dense.size(); ++i) CHECK(dense[i] == oracle[i]);

    auto zero = delta_p_oracle(s, Partition::single_class(4));
    for (double v : zero) CHECK(v == 0.0);

    auto two = Partition::from_classes({{0, 1}, {2, 3}});
    auto g = class_graph(s, two);
    auto o2 = delta_p_oracle(s, two);
    CHECK(o2[0 * 4 + 2] == g.at(0, 1));  // only one simple sequence
}

TEST_CASE("delta_p_oracle enforces the class budget") {
    Rng rng(37);
    auto s = pqtest::random_cloud(rng, 12);
    CHECK_THROWS_AS(delta_p_oracle(s, Partition::singletons(12)), CapacityError);
}

TEST_CASE("delta_p matches the oracle and both solver paths agree") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 4 + rng.below(12);
        auto s = pqtest::random_cloud(rng, n);
        auto p = pqtest::random_partition(rng, n, 2 + rng.below(7));
        auto fast = delta_p(s, p);  // triangle-certified: hub route
        auto plain = s;
        plain.triangle_certified = false;
        auto slow = delta_p(plain, p);  // dense Dijkstra
        auto oracle = delta_p_oracle(s, p);
        const double tol = 1e-12 * fast.diameter;
        auto fd = fast.dense();
        auto sd = slow.dense();
        for (std::size_t i = 0; i < fd.size(); ++i) {
            CHECK(std::abs(fd[i] - oracle[i]) <= tol);
            CHECK(std::abs(sd[i] - oracle[i]) <= tol);
        }
    }
}

TEST_CASE("coarsening the partition can only shrink delta") {
    Rng rng(43);
    auto s = pqtest::random_cloud(rng, 20);
    auto fine = pqtest::random_partition(rng, s.n, 8);
    // coarsen: merge pairs of fine classes
    std::vector<int> coarse_of(s.n);
    for (int i = 0; i < s.n; ++i) coarse_of[i] = fine.class_of[i] / 2;
    auto coarse = Partition::from_class_of(coarse_of);
    auto qf = delta_p(s, fine);
    auto qc = delta_p(s, coarse);
    const double tol = 1e-12 * qf.diameter;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) CHECK(qc.at(i, j) <= qf.at(i, j) + tol);
}

TEST_CASE("delta scales linearly with the metric") {
    Rng rng(47);
    auto s = pqtest::random_cloud(rng, 15);
    auto p = pqtest::random_partition(rng, s.n, 5);
    auto q1 = delta_p(s, p);
    auto scaled = s;
    for (auto& v : scaled.dist) v *= 3.5;
    auto q2 = delta_p(scaled, p);
    const double tol = 1e-12 * q2.diameter;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) CHECK(std::abs(q2.at(i, j) - 3.5 * q1.at(i, j)) <= tol);
    auto a = quotient_space(q1, 0.0);
    auto b = quotient_space(q2, 0.0);
    CHECK(a.Q.classes == b.Q.classes);
}

TEST_CASE("string_witness reconstructs an optimal class sequence") {
    auto s = pqtest::line_0_1_9_10();
    auto p = line_partition();
    auto g = class_graph(s, p);
    auto q = delta_p(s, p);
    auto w = string_witness(g, q, 0, 2);  // {0} -> {10} via {1,9}
    CHECK(w.class_sequence == std::vector<int>{0, 1, 2});
    CHECK(w.total == q.at_classes(0, 2));
    // recomputed total within 1e-12 relative
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < w.class_sequence.size(); ++i)
        total += g.at(w.class_sequence[i], w.class_sequence[i + 1]);
    CHECK(std::abs(total - w.total) <= 1e-12 * q.diameter);
}

TEST_CASE("quotient_space at tau 0 reproduces the partition") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, line_partition());
    auto qs = quotient_space(q, 0.0);
    REQUIRE(qs.Q.K() == 3);
    CHECK(qs.Q.classes == line_partition().classes);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(qs.at(a, b) == q.at_classes(a, b));
    // pi is onto and consistent
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) CHECK(qs.at(qs.pi[i], qs.pi[j]) == q.at(i, j));
}

TEST_CASE("quotient_space merges within tau and rejects negative tau") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, line_partition());
    CHECK_THROWS_AS(quotient_space(q, -1.0), std::invalid_argument);
    auto merged = quotient_space(q, 1.5);  // merges {0} and {10} into the middle class
    CHECK(merged.Q.K() == 1);
}

TEST_CASE("partition classes refine the quotient classes under merging") {
    Rng rng(73);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 6 + rng.below(20);
        auto s = pqtest::random_cloud(rng, n);
        auto p = pqtest::random_partition(rng, n, 2 + rng.below(6));
        auto q = delta_p(s, p);
        auto qs = quotient_space(q, 0.05 * q.diameter);
        CHECK(qs.Q.K() <= p.K());
        for (const auto& cls : p.classes) {
            const int target = qs.pi[cls.front()];
            for (int g : cls) CHECK(qs.pi[g] == target);
        }
        // merged classes stay within the merge slack through chains
        for (int a = 0; a < p.K(); ++a)
            for (int b = 0; b < p.K(); ++b)
                if (q.at_classes(a, b) <= 0.05 * q.diameter)
                    CHECK(qs.pi[p.classes[a].front()] == qs.pi[p.classes[b].front()]);
    }
}

TEST_CASE("quotient_space on the singleton partition is the identity") {
    Rng rng(53);
    auto s = pqtest::random_cloud(rng, 18);
    auto q = delta_p(s, Partition::singletons(s.n));
    auto qs = quotient_space(q, 0.0);
    CHECK(qs.Q.K() == s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) CHECK(qs.at(qs.pi[i], qs.pi[j]) == s.d(i, j));
}

TEST_CASE("verify_pseudometric passes on delta_p output and catches corruption") {
    Rng rng(59);
    auto s = pqtest::random_cloud(rng, 30);
    auto p = pqtest::random_partition(rng, s.n, 5);
    auto q = delta_p(s, p);
    CHECK(verify_pseudometric(s, q).ok());

    auto bad = q;
    bad.class_delta[1] = bad.class_delta[1] * 2 + 1.0;  // corrupt one class entry
    auto rep = verify_pseudometric(s, bad);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("lower_bound_check on the worked instance and random F-forms") {
    auto s = pqtest::line_0_1_9_10();
    auto F = SubsetRef::of({1, 2});
    auto q = delta_p(s, line_partition());
    auto rep = lower_bound_check(s, q, F);
    CHECK(rep.ok());
    // the bound itself: delta(0,10)=2 >= min(max(1,1),10) = 1
    CHECK(q.at(0, 3) >= 1.0);

    Rng rng(61);
    auto cloud = pqtest::random_cloud(rng, 40);
    std::vector<int> fidx;
    for (int i = 0; i < cloud.n; ++i)
        if (rng.uniform() < 0.25) fidx.push_back(i);
    if (fidx.empty()) fidx.push_back(0);
    auto Fr = SubsetRef::of(fidx);
    auto comp = epsilon_components(cloud, Fr, 0.2);
    std::vector<std::vector<int>> classes = comp.classes;
    for (int i = 0; i < cloud.n; ++i)
        if (!Fr.contains(i)) classes.push_back({i});
    auto part = Partition::from_classes(classes);
    auto qr = delta_p(cloud, part);
    CHECK(lower_bound_check(cloud, qr, Fr).ok());
    // non-F-form partitions are rejected
    CHECK_THROWS_AS(lower_bound_check(cloud, delta_p(cloud, Partition::single_class(cloud.n)),
                                      Fr),
                    std::invalid_argument);
}

TEST_CASE("local_isometry_check holds on F-form partitions") {
    // x at distance 3 from F: ball of radius 1 around it is isometric
    auto s = MetricSpace::from_points({{0, 0}, {3, 0}, {3.4, 0}, {2.6, 0}, {6, 0}});
    auto F = SubsetRef::of({0});
    std::vector<std::vector<int>> classes = {{0}};
    for (int i = 1; i < s.n; ++i) classes.push_back({i});
    auto q = delta_p(s, Partition::from_classes(classes));
    auto rep = local_isometry_check(s, q, F);
    CHECK(rep.ok());
    CHECK(rep.checked > 0);

    // F = whole space: vacuous pass with a notice
    auto qf = delta_p(s, Partition::from_classes({{0, 1, 2, 3, 4}}));
    auto all = SubsetRef::full(s.n);
    auto vac = local_isometry_check(s, qf, all);
    CHECK(vac.ok());
    CHECK_FALSE(vac.notice.empty());
}

TEST_CASE("f_restricted_delta equality on line clusters") {
    // two F-clusters {0.0, 0.1} and {5.0, 5.1} with singletons scattered between
    auto s = MetricSpace::from_points(
        {{0.0, 0}, {0.1, 0}, {1.5, 0}, {2.5, 0}, {3.5, 0}, {5.0, 0}, {5.1, 0}});
    auto F = SubsetRef::of({0, 1, 5, 6});
    auto comp = epsilon_components(s, F, 0.2);
    REQUIRE(comp.K() == 2);
    std::vector<std::vector<int>> classes = comp.classes;
    for (int i : {2, 3, 4}) classes.push_back({i});
    auto q = delta_p(s, Partition::from_classes(classes));
    auto fr = f_restricted_delta(s, q, F);
    CHECK(fr.equality.ok());
    REQUIRE(fr.f_classes.size() == 2);
    CHECK(fr.delta_f[1] == doctest::Approx(4.9).epsilon(1e-12));
}

TEST_CASE("f_restricted_delta on a single F class is trivially zero") {
    auto s = pqtest::line_0_1_9_10();
    auto F = SubsetRef::of({1, 2});
    auto q = delta_p(s, line_partition());
    auto fr = f_restricted_delta(s, q, F);
    REQUIRE(fr.f_classes.size() == 1);
    CHECK(fr.delta_f[0] == 0.0);
    CHECK(fr.equality.ok());
}

TEST_CASE("f_restricted_delta equality on random two-blob clouds") {
    Rng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({rng.uniform() * 0.2, rng.uniform() * 0.2});
        for (int i = 0; i < 8; ++i)
            pts.push_back({2.0 + rng.uniform() * 0.2, rng.uniform() * 0.2});
        for (int i = 0; i < 12; ++i)
            pts.push_back({rng.uniform() * 2.2, 0.4 + rng.uniform()});
        auto s = MetricSpace::from_points(pts);
        std::vector<int> fidx(16);
        std::iota(fidx.begin(), fidx.end(), 0);
        auto F = SubsetRef::of(fidx);
        auto comp = epsilon_components(s, F, 0.5);
        std::vector<std::vector<int>> classes = comp.classes;
        for (int i = 16; i < s.n; ++i) classes.push_back({i});
        auto q = delta_p(s, Partition::from_classes(classes));
        CHECK(f_restricted_delta(s, q, F).equality.ok());
    }
}

TEST_CASE("separation_check sees positive distances between F classes") {
    auto s = pqtest::line_0_1_9_10();
    auto q = delta_p(s, line_partition());
    auto qs = quotient_space(q, 0.0);
    CHECK(separation_check(qs, {1}).ok());          // single class: vacuous
    CHECK(separation_check(qs, {0, 1, 2}).ok());    // all distances positive
}
