#include <doctest.h>

#include "coldplate/errors.hpp"
#include "coldplate/properties.hpp"

using namespace coldplate;

TEST_CASE("built-in materials carry solver default properties") {
    const auto cu = get_material("copper");
    CHECK(cu.thermal_conductivity == doctest::Approx(387.6));
    CHECK(cu.density == doctest::Approx(8978));
    CHECK(cu.specific_heat == doctest::Approx(381));
    const auto al = get_material("aluminum");
    CHECK(al.thermal_conductivity == doctest::Approx(202.4));
    CHECK(al.density == doctest::Approx(2719));
    const auto ss = get_material("stainless-steel");
    CHECK(ss.thermal_conductivity == doctest::Approx(16.27));
    CHECK(ss.density == doctest::Approx(8030));
}

TEST_CASE("conductivity ordering copper > aluminum > stainless steel") {
    CHECK(get_material("copper").thermal_conductivity > get_material("aluminum").thermal_conductivity);
    CHECK(get_material("aluminum").thermal_conductivity > get_material("stainless-steel").thermal_conductivity);
}

TEST_CASE("unknown material names the missing key") {
    try {
        get_material("unobtainium");
        FAIL("expected UnknownMaterialError");
    } catch (const UnknownMaterialError& e) {
        CHECK(std::string(e.what()).find("unobtainium") != std::string::npos);
    }
}

TEST_CASE("water at 20 C has a Prandtl number near 7") {
    const auto w = water_at_reference();
    CHECK(w.reference_temperature == 20.0);
    CHECK(w.density == doctest::Approx(998.2));
    CHECK(w.dynamic_viscosity == doctest::Approx(1.003e-3));
    CHECK(w.prandtl() == doctest::Approx(1.003e-3 * 4182 / 0.6));
    CHECK(w.prandtl() > 6.5);
    CHECK(w.prandtl() < 7.5);
}

TEST_CASE("library merge overrides single fields and adds new records") {
    MaterialLibrary lib;
    lib.merge(nlohmann::json::parse(R"({"copper": {"conductivity_wpmk": 400},
        "brass": {"conductivity_wpmk": 109, "density_kgpm3": 8530, "specific_heat_jpkgk": 380}})"));
    CHECK(lib.get("copper").thermal_conductivity == 400);
    CHECK(lib.get("copper").density == doctest::Approx(8978));
    CHECK(lib.contains("brass"));
    CHECK(lib.get("brass").density == 8530);
}

TEST_CASE("library merge rejects incomplete new records and bad values") {
    MaterialLibrary lib;
    CHECK_THROWS_AS(lib.merge(nlohmann::json::parse(R"({"brass": {"conductivity_wpmk": 109}})")),
                    InvalidInputError);
    CHECK_THROWS_AS(lib.merge(nlohmann::json::parse(R"({"copper": {"density_kgpm3": -1}})")),
                    InvalidInputError);
    CHECK_THROWS_AS(lib.merge(nlohmann::json::parse(R"({"copper": {"colour": "red"}})")), InvalidInputError);
}

TEST_CASE("nonpositive properties are rejected") {
    auto m = get_material("copper");
    m.thermal_conductivity = 0;
    CHECK_THROWS_AS(check(m), InvalidInputError);
    auto w = water_at_reference();
    w.dynamic_viscosity = -1;
    CHECK_THROWS_AS(check(w), InvalidInputError);
}
