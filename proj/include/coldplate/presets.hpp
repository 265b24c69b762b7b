#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "coldplate/geometry.hpp"

namespace coldplate {

// Switching losses per switch pair. Each pair is one half-bridge module.
inline constexpr std::array<double, 6> kPrimaryPairLosses{102.0, 107.16, 84.88, 91.1, 89.6, 85.16};
inline constexpr std::array<double, 2> kSecondaryPairLosses{211.4, 127.18};

// Assumed package dimensions (not given with the loss data).
inline constexpr double kModuleLength = 0.062; // along the flow
inline constexpr double kModuleWidth = 0.122;
inline constexpr double kDieSize = 0.010;
inline constexpr int kDiesPerModule = 6;

// Six dies on a 2 (streamwise) x 3 (lateral) grid, power split equally.
ModulePlacement make_module(std::string id, Face face, Eigen::Vector2d origin, double power);

// Final primary design: Cu 480x190x7.6 mm, 2 rows x 6 semicircular r = 2.3 mm,
// double-sided with three modules per face.
Assembly primary_side();

// Starting primary design: Cu 480x190x18 mm, 2 rows x 3 semicircular r = 4.6 mm.
Assembly primary_side_initial();

// Cu 330x205x7.6 mm, 2 rows x 6 semicircular r = 2.3 mm, two modules on top.
Assembly secondary_side();

// Rectangular 2 mm x 10 mm reference channels, three per row, two rows.
ChannelLayout rectangular_reference_layout(double channel_length);

std::vector<std::string> preset_names();
Assembly preset(std::string_view name);

} // namespace coldplate
