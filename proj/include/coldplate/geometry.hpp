#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "coldplate/errors.hpp"
#include "coldplate/properties.hpp"

namespace coldplate {

// ---------------------------------------------------------------------------
// Channel cross-sections
// ---------------------------------------------------------------------------

// width is measured across the plate, height into its thickness.
template <typename Scalar>
struct BasicRectangular {
    Scalar width{};
    Scalar height{};
    bool operator==(const BasicRectangular&) const = default;
};

// Flat side faces the nearest plate surface.
template <typename Scalar>
struct BasicSemicircular {
    Scalar radius{};
    bool operator==(const BasicSemicircular&) const = default;
};

template <typename Scalar>
using BasicChannelShape = std::variant<BasicRectangular<Scalar>, BasicSemicircular<Scalar>>;

using Rectangular = BasicRectangular<double>;
using Semicircular = BasicSemicircular<double>;
using ChannelShape = BasicChannelShape<double>;

template <typename Scalar>
void check(const BasicChannelShape<Scalar>& shape) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BasicRectangular<Scalar>>) {
                if (!(s.width > Scalar(0)) || !(s.height > Scalar(0)))
                    throw InvalidInputError("rectangular channel dimensions must be strictly positive");
            } else {
                if (!(s.radius > Scalar(0)))
                    throw InvalidInputError("semicircular channel radius must be strictly positive");
            }
        },
        shape);
}

template <typename Scalar>
Scalar cross_section_area(const BasicChannelShape<Scalar>& shape) {
    check(shape);
    return std::visit(
        [](const auto& s) -> Scalar {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BasicRectangular<Scalar>>) {
                return s.width * s.height;
            } else {
                return std::numbers::pi_v<Scalar> * s.radius * s.radius / Scalar(2);
            }
        },
        shape);
}

template <typename Scalar>
Scalar wetted_perimeter(const BasicChannelShape<Scalar>& shape) {
    check(shape);
    return std::visit(
        [](const auto& s) -> Scalar {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BasicRectangular<Scalar>>) {
                return Scalar(2) * (s.width + s.height);
            } else {
                return s.radius * (std::numbers::pi_v<Scalar> + Scalar(2));
            }
        },
        shape);
}

template <typename Scalar>
Scalar hydraulic_diameter(const BasicChannelShape<Scalar>& shape) {
    return Scalar(4) * cross_section_area(shape) / wetted_perimeter(shape);
}

// Extent of the channel into the plate thickness.
template <typename Scalar>
Scalar channel_depth(const BasicChannelShape<Scalar>& shape) {
    return std::visit(
        [](const auto& s) -> Scalar {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BasicRectangular<Scalar>>)
                return s.height;
            else
                return s.radius;
        },
        shape);
}

// Extent of the channel across the plate width.
template <typename Scalar>
Scalar channel_span(const BasicChannelShape<Scalar>& shape) {
    return std::visit(
        [](const auto& s) -> Scalar {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BasicRectangular<Scalar>>)
                return s.width;
            else
                return Scalar(2) * s.radius;
        },
        shape);
}

std::string shape_name(const ChannelShape& shape);

// ---------------------------------------------------------------------------
// Plate, channels and modules
// ---------------------------------------------------------------------------

// Straight parallel channels running along the plate length (x). Row 0 sits
// under the top face, row 1 above the bottom face.
struct ChannelLayout {
    int rows = 1;
    int channels_per_row = 1;
    double channel_length = 0.0;  // m
    ChannelShape shape = Semicircular{0.0};
    double cover_thickness = 0.0; // m, solid between channel wall and plate surface
    std::optional<double> lateral_pitch; // m, uniform spread across the width when unset

    int channel_count() const { return rows * channels_per_row; }
    bool operator==(const ChannelLayout&) const = default;
};

struct PlateGeometry {
    double length = 0.0;    // m, along the flow
    double width = 0.0;     // m
    double thickness = 0.0; // m
    SolidMaterial material;
    bool operator==(const PlateGeometry&) const = default;
};

enum class Face { top, bottom };

std::string to_string(Face face);

// center is relative to the owning module's origin.
struct DieSource {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    Eigen::Vector2d footprint = Eigen::Vector2d::Zero();
    double power = 0.0; // W
    bool operator==(const DieSource&) const = default;
};

struct ModulePlacement {
    std::string id;
    Face face = Face::top;
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();    // lower corner on the plate, m
    Eigen::Vector2d footprint = Eigen::Vector2d::Zero(); // (dx, dy), m
    std::vector<DieSource> dies;

    double power() const;
    bool operator==(const ModulePlacement&) const = default;
};

struct Assembly {
    PlateGeometry plate;
    ChannelLayout layout;
    std::vector<ModulePlacement> modules;

    double total_power() const;
    bool operator==(const Assembly&) const = default;
};

// Centre-to-centre lateral distance between neighbouring channels.
double lateral_pitch(const ChannelLayout& layout, double plate_width);

// Placement of one straight channel in the plate cross-section.
struct ChannelPath {
    int row = 0;
    int index = 0;     // within the row
    double y_center = 0.0;
    double z_flat = 0.0;    // z of the side facing the nearest surface
    double z_direction = -1.0; // -1: body extends downward from z_flat (top row)
    double x_begin = 0.0;
    double x_end = 0.0;
};

std::vector<ChannelPath> channel_paths(const Assembly& assembly);

// Total wetted area of all channels, P L (rows N).
double total_wetted_area(const ChannelLayout& layout);

// Radius of a semicircular channel giving the same total wetted area as the
// rectangular reference layout when the row holds new_channels_per_row channels.
double equal_area_radius(const ChannelLayout& reference, int new_channels_per_row);

double channel_volume(const ChannelLayout& layout);

// Solid plate mass; coolant excluded.
double plate_mass(const Assembly& assembly);

// All violations found, empty when the assembly is valid.
std::vector<std::string> validate(const Assembly& assembly);

// Throws ValidationError when validate() reports anything.
void require_valid(const Assembly& assembly);

} // namespace coldplate
