#include <doctest.h>

#include <cmath>

#include "pq/congestion.hpp"
#include "pq/continua.hpp"
#include "pq/metric_space.hpp"

using namespace pq;

TEST_CASE("interval generator: collinear points, empty truth") {
    auto c = generate("interval", 100);
    CHECK(c.space.n == 100);
    CHECK(c.truth_congested.empty());
    for (const auto& p : c.space.coords) CHECK(p[1] == 0.0);
    CHECK(validate_metric(c.space, true).ok());
}

TEST_CASE("circle generator: empty truth, round shape") {
    auto c = generate("circle", 100);
    CHECK(c.truth_congested.empty());
    for (const auto& p : c.space.coords)
        CHECK(std::abs(std::hypot(p[0], p[1]) - 1.0) < 1e-12);
}

TEST_CASE("topologist sine with explicit x_min from the worked example") {
    auto c = generate("topologist_sine", 2000, {{"x_min", 0.02}});
    CHECK(c.space.n <= 2000);
    CHECK(c.space.n > 1800);
    // limit-segment samples are labeled congested, and only those
    CHECK(c.truth_congested.size() > 50);
    for (int t : c.truth_congested.indices) CHECK(c.space.coords[t][0] == 0.0);
    for (int i = 0; i < c.space.n; ++i)
        if (!c.truth_congested.contains(i)) CHECK(c.space.coords[i][0] > 0.0);
    CHECK(c.params.at("x_min") == 0.02);
}

TEST_CASE("topologist sine auto-scales its truncation gap to the resolution") {
    for (int n : {500, 1000, 2000}) {
        auto c = generate("topologist_sine", n);
        const double delta = 2.0 * c.space.max_nn_distance();
        const double x_min = c.params.at("x_min");
        CHECK(x_min > delta);
        CHECK(x_min < 3.0 * delta);
        // the gap splits the sample into tail + segment at resolution delta
        auto comp = epsilon_components(c.space, SubsetRef::full(c.space.n), delta);
        CHECK(comp.K() == 2);
    }
}

TEST_CASE("non-sine generators are connected at the default resolution") {
    struct Case {
        const char* name;
        int n;
    } cases[] = {{"interval", 50},     {"circle", 50},         {"warsaw_circle", 600},
                 {"comb", 900},        {"cantor_fan", 600},    {"harmonic_broom", 900}};
    for (auto [name, n] : cases) {
        auto c = generate(name, n);
        const double delta = 2.0 * c.space.max_nn_distance();
        auto comp = epsilon_components(c.space, SubsetRef::full(c.space.n), delta);
        CHECK_MESSAGE(comp.K() == 1, name);
    }
}

TEST_CASE("every generator passes the triangle check") {
    for (const auto& name : generator_names()) {
        auto c = generate(name, name == "interval" || name == "circle" ? 120 : 900);
        CHECK_MESSAGE(validate_metric(c.space, true).ok(), name);
    }
}

TEST_CASE("truth loci match each continuum") {
    CHECK(generate("interval", 100).truth_congested.empty());
    CHECK(generate("circle", 100).truth_congested.empty());
    CHECK(generate("cantor_fan", 600).truth_congested.empty());
    for (const char* name : {"topologist_sine", "warsaw_circle"}) {
        auto c = generate(name, 700);
        CHECK(c.truth_congested.size() > 1);
        for (int t : c.truth_congested.indices) CHECK(c.space.coords[t][0] == 0.0);
    }
    auto comb = generate("comb", 900);
    CHECK(comb.truth_congested.size() > 1);
    for (int t : comb.truth_congested.indices) {
        CHECK(comb.space.coords[t][0] == 0.0);
        CHECK(comb.space.coords[t][1] > 0.0);
    }
    auto broom = generate("harmonic_broom", 900);
    CHECK(broom.truth_congested.size() > 1);
    for (int t : broom.truth_congested.indices) {
        CHECK(broom.space.coords[t][1] == 0.0);
        CHECK(broom.space.coords[t][0] > 0.0);
    }
}

TEST_CASE("generation is deterministic") {
    auto a = generate("warsaw_circle", 800);
    auto b = generate("warsaw_circle", 800);
    REQUIRE(a.space.n == b.space.n);
    for (int i = 0; i < a.space.n; ++i) {
        CHECK(a.space.coords[i][0] == b.space.coords[i][0]);
        CHECK(a.space.coords[i][1] == b.space.coords[i][1]);
    }
    CHECK(a.truth_congested.indices == b.truth_congested.indices);
}

TEST_CASE("unknown generator and starved budgets are rejected") {
    CHECK_THROWS_AS(generate("klein_bottle", 100), UnknownGeneratorError);
    CHECK_THROWS_AS(generate("interval", 10), BudgetError);
    try {
        generate("topologist_sine", 500, {{"x_min", 0.02}});
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("minimum n") != std::string::npos);
    }
    CHECK_THROWS_AS(generate("comb", 100), BudgetError);
}

TEST_CASE("no generator emits duplicate points") {
    for (const auto& name : generator_names()) {
        auto c = generate(name, name == "interval" || name == "circle" ? 100 : 900);
        double min_gap = 1e300;
        for (int i = 0; i < c.space.n; ++i)
            for (int j = i + 1; j < c.space.n; ++j)
                min_gap = std::min(min_gap, c.space.d(i, j));
        CHECK_MESSAGE(min_gap > 0.0, name);
    }
}
