#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <tuple>

#include "coldplate/errors.hpp"
#include "coldplate/studies.hpp"

using namespace coldplate;

namespace {

// Reference ordering written independently of ranks_before.
bool oracle_better(const StudyRow& a, const StudyRow& b) {
    const auto key = [](const StudyRow& r) {
        return std::make_tuple(r.mass, r.t_max, r.pressure_drop, r.design.material, r.design.shape,
                               r.design.channels_per_row, r.design.channel_dimension, r.design.cover_thickness,
                               r.design.thickness, r.design.velocity);
    };
    return key(a) < key(b);
}

DesignProblem small_problem() {
    DesignProblem p;
    p.materials = {get_material("copper"), get_material("aluminum"), get_material("stainless-steel")};
    p.channel_counts = {3, 6};
    p.cover_thicknesses = {1.0e-3, 0.5e-3};
    p.v_min = 0.5;
    p.v_max = 2.9;
    p.v_step = 0.3;
    return p;
}

struct ThreadsEnv {
    explicit ThreadsEnv(const char* value) { setenv("COLDPLATE_THREADS", value, 1); }
    ~ThreadsEnv() { unsetenv("COLDPLATE_THREADS"); }
};

} // namespace

TEST_CASE("worker count honours COLDPLATE_THREADS") {
    const std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
    {
        ThreadsEnv env("3");
        CHECK(worker_count() == std::min<std::size_t>(3, hardware));
    }
    {
        ThreadsEnv env("1");
        CHECK(worker_count() == 1);
    }
    {
        ThreadsEnv env("zero");
        CHECK(worker_count() >= 1);
    }
}

TEST_CASE("feasibility checks every limit") {
    const Constraints c;
    CHECK(is_feasible(c, 100.0, 10e3, 1.0));
    CHECK(!is_feasible(c, 136.0, 10e3, 1.0));
    CHECK(!is_feasible(c, 100.0, 60e3, 1.0));
    CHECK(!is_feasible(c, 100.0, 10e3, 3.5));
}

TEST_CASE("velocity sweep keeps input order and lowers t_max") {
    SweepSpec spec;
    spec.values = {0.5, 0.8, 1.1, 1.4, 1.7, 2.0, 2.3, 2.6, 2.9};
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == spec.values.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].design.velocity == std::get<double>(spec.values[i]));
        if (i > 0) CHECK(r.rows[i].t_max < r.rows[i - 1].t_max);
        if (i > 0) CHECK(r.rows[i].pressure_drop > r.rows[i - 1].pressure_drop);
    }
    REQUIRE(r.best.has_value());
}

TEST_CASE("sweep results do not depend on the thread count") {
    SweepSpec spec;
    spec.axis = SweepAxis::material;
    spec.values = {get_material("copper"), get_material("aluminum"), get_material("stainless-steel")};
    StudyResult one;
    StudyResult many;
    {
        ThreadsEnv env("1");
        one = run_sweep(spec);
    }
    {
        ThreadsEnv env("4");
        many = run_sweep(spec);
    }
    REQUIRE(one.rows.size() == many.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].design == many.rows[i].design);
        CHECK(one.rows[i].t_max == many.rows[i].t_max);
    }
}

TEST_CASE("channel count axis resizes channels for equal wetted area") {
    SweepSpec spec;
    spec.base = primary_side_initial();
    spec.axis = SweepAxis::channel_count;
    spec.values = {3, 6};
    const auto r = run_sweep(spec);
    CHECK(r.rows[0].design.channel_dimension == doctest::Approx(equal_area_radius(spec.count_reference, 3)));
    CHECK(r.rows[1].design.channel_dimension == doctest::Approx(equal_area_radius(spec.count_reference, 6)));
    MESSAGE("3 channels " << r.rows[0].t_max << " C, 6 channels " << r.rows[1].t_max << " C");
    CHECK(std::abs(r.rows[1].t_max - r.rows[0].t_max) <= 5.0);
}

TEST_CASE("a failing sweep point reports the lowest failing index") {
    SweepSpec spec;
    spec.values = {1.0, -1.0, 2.0, 0.0};
    try {
        run_sweep(spec);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("sweep point 1") != std::string::npos);
    }
    spec.values = {1.0, get_material("copper")};
    CHECK_THROWS_AS(run_sweep(spec), Error);
    spec.values.clear();
    CHECK_THROWS_AS(run_sweep(spec), InvalidInputError);
}

TEST_CASE("secondary scenario lowers t_max at every step") {
    const auto r = secondary_side_scenario();
    const auto steps = secondary_side_steps();
    REQUIRE(r.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r.rows[i].design.velocity == steps[i].velocity);
        CHECK(r.rows[i].design.cover_thickness == steps[i].cover_thickness);
        if (i > 0) CHECK(r.rows[i].t_max < r.rows[i - 1].t_max);
    }
}

TEST_CASE("candidate grid enumerates material x count x cover x velocity") {
    const auto p = small_problem();
    const auto c = candidates(p);
    CHECK(c.size() == 3 * 2 * 2 * 9);
    CHECK(c.front().flow.inlet_velocity == 0.5);
    CHECK(c[3].flow.inlet_velocity == 1.4);
    CHECK(c.back().flow.inlet_velocity == 2.9);
    for (const auto& cand : c) {
        const double r = std::get<Semicircular>(cand.assembly.layout.shape).radius;
        CHECK(cand.assembly.plate.thickness ==
              doctest::Approx(2 * r + 2 * cand.assembly.layout.cover_thickness + p.min_web));
        CHECK(validate(cand.assembly).empty());
    }
}

TEST_CASE("optimizer matches exhaustive enumeration") {
    const auto p = small_problem();
    const EvaluationContext ctx;
    const auto result = optimize(p, ctx);

    std::optional<StudyRow> oracle;
    for (const auto& cand : candidates(p)) {
        const auto row = evaluate(cand.assembly, cand.flow, ctx, p.constraints);
        if (row.feasible && (!oracle || oracle_better(row, *oracle))) oracle = row;
    }
    REQUIRE(oracle.has_value());
    REQUIRE(result.best.has_value());
    CHECK(result.best->design == oracle->design);
    CHECK(result.best->mass == oracle->mass);
    CHECK(result.best->t_max == oracle->t_max);
    for (const auto& row : result.rows) {
        if (!row.evaluated) CHECK(row.mass > result.best->mass);
    }
}

TEST_CASE("optimizer agrees with enumeration on random problems") {
    std::mt19937 rng(7);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    const std::vector<SolidMaterial> pool{get_material("copper"), get_material("aluminum"),
                                          get_material("stainless-steel")};
    for (int trial = 0; trial < 12; ++trial) {
        DesignProblem p;
        p.materials = {pool[pick(3)], pool[pick(3)]};
        if (p.materials[0] == p.materials[1]) p.materials.pop_back();
        p.channel_counts = {2 + pick(3), 5 + pick(3)};
        p.cover_thicknesses = {0.5e-3 + 1e-4 * pick(10)};
        p.v_min = 0.3 + 0.1 * pick(5);
        p.v_max = p.v_min + 1.5;
        p.v_step = 0.25;
        p.constraints.t_max_limit = 70.0 + 5.0 * pick(10);
        p.constraints.pressure_budget = 5e3 + 5e3 * pick(6);
        const auto result = optimize(p);
        std::optional<StudyRow> oracle;
        for (const auto& cand : candidates(p)) {
            const auto row = evaluate(cand.assembly, cand.flow, EvaluationContext{}, p.constraints);
            if (row.feasible && (!oracle || oracle_better(row, *oracle))) oracle = row;
        }
        CHECK(result.best.has_value() == oracle.has_value());
        if (result.best && oracle) CHECK(result.best->design == oracle->design);
    }
}

TEST_CASE("infeasible design problem has no best design") {
    auto p = small_problem();
    p.constraints.t_max_limit = 50.0;
    const auto result = optimize(p);
    CHECK(!result.best.has_value());
    for (const auto& row : result.rows) CHECK(row.evaluated);
}

TEST_CASE("ranking prefers lighter, then cooler, then lower pressure drop") {
    StudyRow a;
    a.mass = 1.0;
    a.t_max = 90.0;
    a.pressure_drop = 1000.0;
    StudyRow b = a;
    b.mass = 1.1;
    b.t_max = 60.0;
    CHECK(ranks_before(a, b));
    b = a;
    b.t_max = 80.0;
    CHECK(ranks_before(b, a));
    b = a;
    b.pressure_drop = 900.0;
    CHECK(ranks_before(b, a));
    b = a;
    b.design.material = "b";
    a.design.material = "a";
    CHECK(ranks_before(a, b));
    CHECK(!ranks_before(a, a));
}

TEST_CASE("invalid design problems are rejected") {
    auto p = small_problem();
    p.materials.clear();
    CHECK_THROWS_AS(candidates(p), InvalidInputError);
    p = small_problem();
    p.v_step = 0.0;
    CHECK_THROWS_AS(candidates(p), InvalidInputError);
}
