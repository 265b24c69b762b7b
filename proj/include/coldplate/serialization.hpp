#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coldplate/fv_conduction.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/hydraulics.hpp"
#include "coldplate/properties.hpp"
#include "coldplate/studies.hpp"
#include "coldplate/thermal_network.hpp"

namespace coldplate {

using nlohmann::json;

// Assembly schema (SI units, suffixes in key names):
//   plate:    {length_m, width_m, thickness_m, material}
//   channels: {rows, channels_per_row, channel_length_m?, cover_thickness_m,
//              lateral_pitch_m?, shape: {type: "semicircular", radius_m} |
//                                       {type: "rectangular", width_m, height_m}}
//   modules:  [{id, face: "top"|"bottom", origin_m: [x, y], footprint_m: [dx, dy],
//               dies: [{center_m: [x, y], footprint_m: [dx, dy], power_w}]}]
// Die centres are relative to the module origin.
json to_json(const Assembly& assembly);
json to_json(const ChannelShape& shape);

// Strict reader: unknown keys, missing fields and type mismatches are appended
// to `errors` (prefixed with `path`) instead of thrown.
Assembly assembly_from_json(const json& j, const MaterialLibrary& materials, const std::string& path,
                            std::vector<std::string>& errors);
ChannelShape shape_from_json(const json& j, const std::string& path, std::vector<std::string>& errors);
CoolantProps coolant_from_json(const json& j, const CoolantProps& base, const std::string& path,
                               std::vector<std::string>& errors);
DieStack stack_from_json(const json& j, const std::string& path, std::vector<std::string>& errors);

json to_json(const CoolantProps& coolant);
json to_json(const DieStack& stack);
json to_json(const HydraulicsReport& report);
json to_json(const ThermalReport& report);
json to_json(const FvSolution& solution); // summary and coolant profiles, no field
json to_json(const MeshStudy& study);
json to_json(const StudyResult& result);

// Fixed column order:
// material,shape,channels_per_row,channel_dim_m,cover_m,thickness_m,v_mps,t_max_C,dp_Pa,mass_kg,feasible
std::string study_csv(const StudyResult& result);
// cells,t_max_C,delta_K
std::string mesh_study_csv(const MeshStudy& study);
// id,power_W,junction_C,coolant_C,r_stack_KpW,r_spread_KpW,r_cover_KpW,r_conv_KpW
std::string thermal_csv(const ThermalReport& report);
// stream,station,x_m,t_coolant_C
std::string coolant_profile_csv(const FvSolution& solution, const Grid& grid);

} // namespace coldplate
