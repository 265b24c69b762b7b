#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coldplate/errors.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/presets.hpp"

using namespace coldplate;

namespace {

constexpr double pi = std::numbers::pi;

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST_CASE("semicircle area perimeter and hydraulic diameter") {
    const Semicircular s{0.0046};
    const double r = 0.0046;
    CHECK(cross_section_area(ChannelShape{s}) == doctest::Approx(pi * r * r / 2));
    CHECK(wetted_perimeter(ChannelShape{s}) == doctest::Approx(r * (pi + 2)));
    CHECK(hydraulic_diameter(ChannelShape{s}) == doctest::Approx(2 * pi * r / (pi + 2)));
}

TEST_CASE("rectangle of 10 x 2 mm") {
    const ChannelShape s = Rectangular{0.010, 0.002};
    CHECK(cross_section_area(s) == doctest::Approx(2e-5));
    CHECK(wetted_perimeter(s) == doctest::Approx(0.024));
    CHECK(hydraulic_diameter(s) == doctest::Approx(4 * 2e-5 / 0.024));
    CHECK(channel_depth(s) == doctest::Approx(0.002));
    CHECK(channel_span(s) == doctest::Approx(0.010));
}

TEST_CASE("hydraulic diameter equals 4A/P for random shapes") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dim(1e-4, 2e-2);
    for (int i = 0; i < 500; ++i) {
        const ChannelShape semi = Semicircular{dim(rng)};
        const ChannelShape rect = Rectangular{dim(rng), dim(rng)};
        for (const auto& s : {semi, rect}) {
            CHECK(hydraulic_diameter(s) == doctest::Approx(4 * cross_section_area(s) / wetted_perimeter(s)));
            CHECK(hydraulic_diameter(s) > 0);
        }
    }
}

TEST_CASE("shape functions work on float scalars") {
    const BasicChannelShape<float> s = BasicSemicircular<float>{0.0023f};
    CHECK(hydraulic_diameter(s) == doctest::Approx(2 * pi * 0.0023 / (pi + 2)).epsilon(1e-5));
}

TEST_CASE("nonpositive shape dimensions are rejected") {
    CHECK_THROWS_AS(check(ChannelShape{Semicircular{0.0}}), InvalidInputError);
    CHECK_THROWS_AS(check(ChannelShape{Rectangular{0.01, -1.0}}), InvalidInputError);
}

TEST_CASE("equal-area radius for three and six channels") {
    const auto ref = rectangular_reference_layout(0.480);
    const double p_rect = 0.024;
    const double r3 = equal_area_radius(ref, 3);
    const double r6 = equal_area_radius(ref, 6);
    CHECK(r3 == doctest::Approx(p_rect * 3 / ((pi + 2) * 3)));
    CHECK(r6 == doctest::Approx(p_rect * 3 / ((pi + 2) * 6)));
    CHECK(r3 >= 0.0046);
    CHECK(r3 <= 0.0047);
    CHECK(r6 >= 0.0023);
    CHECK(r6 <= 0.00235);
}

TEST_CASE("equal-area radius preserves wetted area for random counts") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> count(1, 12);
    std::uniform_real_distribution<double> dim(5e-4, 1e-2);
    for (int i = 0; i < 200; ++i) {
        ChannelLayout ref{2, count(rng), 0.3, Rectangular{dim(rng), dim(rng)}, 1e-3, std::nullopt};
        const int n = count(rng);
        ChannelLayout semi = ref;
        semi.channels_per_row = n;
        semi.shape = Semicircular{equal_area_radius(ref, n)};
        CHECK(total_wetted_area(semi) == doctest::Approx(total_wetted_area(ref)));
    }
}

TEST_CASE("plate mass matches an independent box-minus-channels sum") {
    for (const auto& a : {primary_side(), primary_side_initial(), secondary_side()}) {
        const double box = a.plate.length * a.plate.width * a.plate.thickness;
        const auto& s = std::get<Semicircular>(a.layout.shape);
        const double holes = a.layout.rows * a.layout.channels_per_row * pi * s.radius * s.radius / 2 *
                             a.layout.channel_length;
        CHECK(plate_mass(a) == doctest::Approx(a.plate.material.density * (box - holes)));
    }
}

TEST_CASE("initial primary plate weighs close to 13 kg and the final one far less") {
    const double initial = plate_mass(primary_side_initial());
    CHECK(initial == doctest::Approx(13.0).epsilon(0.10));
    CHECK(plate_mass(primary_side()) < 0.5 * initial);
}

TEST_CASE("presets validate and carry the loss tables") {
    for (const auto& name : preset_names()) CHECK(validate(preset(name)).empty());
    CHECK(primary_side().total_power() == doctest::Approx(559.9));
    CHECK(secondary_side().total_power() == doctest::Approx(338.58));
    CHECK(primary_side().modules.size() == 6);
    CHECK_THROWS_AS(preset("tertiary"), InvalidInputError);
}

TEST_CASE("channel paths put row 0 under the top face and row 1 over the bottom") {
    const auto a = primary_side();
    const auto paths = channel_paths(a);
    REQUIRE(paths.size() == 12);
    for (const auto& p : paths) {
        if (p.row == 0) {
            CHECK(p.z_flat == doctest::Approx(a.plate.thickness - a.layout.cover_thickness));
            CHECK(p.z_direction == -1.0);
        } else {
            CHECK(p.z_flat == doctest::Approx(a.layout.cover_thickness));
            CHECK(p.z_direction == 1.0);
        }
    }
}

TEST_CASE("validate lists every violation") {
    auto a = primary_side();
    a.layout.cover_thickness = 0.004;      // channels no longer fit
    a.modules[1].origin = a.modules[0].origin; // overlap on the same face
    a.modules[2].dies[0].power = -1;
    const auto v = validate(a);
    CHECK(v.size() >= 3);
    CHECK(mentions(v, "fit"));
    CHECK(mentions(v, "overlap"));
    CHECK(mentions(v, "negative"));
    CHECK_THROWS_AS(require_valid(a), ValidationError);
}

TEST_CASE("modules outside the plate and three channel rows are rejected") {
    auto a = primary_side();
    a.modules[0].origin.x() = a.plate.length;
    a.layout.rows = 3;
    const auto v = validate(a);
    CHECK(v.size() >= 2);
}

TEST_CASE("modules on opposite faces may share a footprint") {
    auto a = primary_side();
    a.modules[3].origin = a.modules[0].origin;
    CHECK(validate(a).empty());
}
