#include "coldplate/serialization.hpp"

#include <cmath>
#include <sstream>

#include "coldplate/format.hpp"
#include "json_reader.hpp"

namespace coldplate {

using detail::ObjectReader;

namespace {

json pair_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

// NaN becomes null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json to_json(const ChannelShape& shape) {
    if (const auto* r = std::get_if<Rectangular>(&shape)) {
        return {{"type", "rectangular"}, {"width_m", r->width}, {"height_m", r->height}};
    }
    return {{"type", "semicircular"}, {"radius_m", std::get<Semicircular>(shape).radius}};
}

json to_json(const Assembly& a) {
    json channels = {
        {"rows", a.layout.rows},
        {"channels_per_row", a.layout.channels_per_row},
        {"channel_length_m", a.layout.channel_length},
        {"shape", to_json(a.layout.shape)},
        {"cover_thickness_m", a.layout.cover_thickness},
    };
    if (a.layout.lateral_pitch) channels["lateral_pitch_m"] = *a.layout.lateral_pitch;

    json modules = json::array();
    for (const auto& m : a.modules) {
        json dies = json::array();
        for (const auto& d : m.dies) {
            dies.push_back({{"center_m", pair_json(d.center)},
                            {"footprint_m", pair_json(d.footprint)},
                            {"power_w", d.power}});
        }
        modules.push_back({{"id", m.id},
                           {"face", to_string(m.face)},
                           {"origin_m", pair_json(m.origin)},
                           {"footprint_m", pair_json(m.footprint)},
                           {"dies", dies}});
    }
    return {
        {"plate",
         {{"length_m", a.plate.length},
          {"width_m", a.plate.width},
          {"thickness_m", a.plate.thickness},
          {"material", a.plate.material.name}}},
        {"channels", channels},
        {"modules", modules},
    };
}

ChannelShape shape_from_json(const json& j, const std::string& path, std::vector<std::string>& errors) {
    ObjectReader r(j, path, errors);
    ChannelShape shape = Semicircular{0.0};
    const auto type = r.required_string("type");
    if (type == "semicircular") {
        shape = Semicircular{r.required_number("radius_m")};
    } else if (type == "rectangular") {
        shape = Rectangular{r.required_number("width_m"), r.required_number("height_m")};
    } else if (r.ok() && !type.empty()) {
        errors.push_back(r.at("type") + ": expected 'semicircular' or 'rectangular'");
    }
    r.finish();
    return shape;
}

Assembly assembly_from_json(const json& j, const MaterialLibrary& materials, const std::string& path,
                            std::vector<std::string>& errors) {
    Assembly a;
    ObjectReader root(j, path, errors);

    if (const auto* plate = root.child("plate")) {
        ObjectReader r(*plate, root.at("plate"), errors);
        a.plate.length = r.required_number("length_m");
        a.plate.width = r.required_number("width_m");
        a.plate.thickness = r.required_number("thickness_m");
        const auto name = r.required_string("material");
        if (!name.empty()) {
            if (materials.contains(name)) {
                a.plate.material = materials.get(name);
            } else {
                errors.push_back(r.at("material") + ": unknown material '" + name + "'");
            }
        }
        r.finish();
    } else if (root.ok()) {
        errors.push_back(root.at("plate") + ": required");
    }

    if (const auto* ch = root.child("channels")) {
        ObjectReader r(*ch, root.at("channels"), errors);
        a.layout.rows = r.required_integer("rows");
        a.layout.channels_per_row = r.required_integer("channels_per_row");
        a.layout.channel_length = r.number("channel_length_m", a.plate.length);
        a.layout.cover_thickness = r.required_number("cover_thickness_m");
        a.layout.lateral_pitch = r.number("lateral_pitch_m");
        if (const auto* s = r.child("shape")) {
            a.layout.shape = shape_from_json(*s, r.at("shape"), errors);
        } else if (r.ok()) {
            errors.push_back(r.at("shape") + ": required");
        }
        r.finish();
    } else if (root.ok()) {
        errors.push_back(root.at("channels") + ": required");
    }

    if (const auto* mods = root.child("modules")) {
        if (!mods->is_array()) {
            errors.push_back(root.at("modules") + ": expected an array");
        } else {
            for (std::size_t i = 0; i < mods->size(); ++i) {
                ObjectReader r((*mods)[i], root.at("modules") + "[" + std::to_string(i) + "]", errors);
                ModulePlacement m;
                m.id = r.required_string("id");
                const auto face = r.required_string("face");
                if (face == "top") {
                    m.face = Face::top;
                } else if (face == "bottom") {
                    m.face = Face::bottom;
                } else if (r.ok() && !face.empty()) {
                    errors.push_back(r.at("face") + ": expected 'top' or 'bottom'");
                }
                m.origin = r.pair("origin_m");
                m.footprint = r.pair("footprint_m");
                if (const auto* dies = r.child("dies")) {
                    if (!dies->is_array()) {
                        errors.push_back(r.at("dies") + ": expected an array");
                    } else {
                        for (std::size_t d = 0; d < dies->size(); ++d) {
                            ObjectReader dr((*dies)[d], r.at("dies") + "[" + std::to_string(d) + "]", errors);
                            DieSource die;
                            die.center = dr.pair("center_m");
                            die.footprint = dr.pair("footprint_m");
                            die.power = dr.required_number("power_w");
                            dr.finish();
                            m.dies.push_back(die);
                        }
                    }
                } else if (r.ok()) {
                    errors.push_back(r.at("dies") + ": required");
                }
                r.finish();
                a.modules.push_back(std::move(m));
            }
        }
    }
    root.finish();
    return a;
}

CoolantProps coolant_from_json(const json& j, const CoolantProps& base, const std::string& path,
                               std::vector<std::string>& errors) {
    CoolantProps c = base;
    ObjectReader r(j, path, errors);
    c.name = r.string("name").value_or(c.name);
    c.density = r.number("density_kgpm3", c.density);
    c.dynamic_viscosity = r.number("viscosity_pas", c.dynamic_viscosity);
    c.specific_heat = r.number("specific_heat_jpkgk", c.specific_heat);
    c.thermal_conductivity = r.number("conductivity_wpmk", c.thermal_conductivity);
    c.reference_temperature = r.number("reference_temperature_c", c.reference_temperature);
    r.finish();
    return c;
}

DieStack stack_from_json(const json& j, const std::string& path, std::vector<std::string>& errors) {
    DieStack stack;
    ObjectReader r(j, path, errors);
    if (const auto* layers = r.child("layers")) {
        if (!layers->is_array()) {
            errors.push_back(r.at("layers") + ": expected an array");
        } else {
            for (std::size_t i = 0; i < layers->size(); ++i) {
                ObjectReader lr((*layers)[i], r.at("layers") + "[" + std::to_string(i) + "]", errors);
                StackLayer l;
                l.name = lr.string("name").value_or("layer" + std::to_string(i));
                l.thickness = lr.required_number("thickness_m");
                l.conductivity = lr.required_number("conductivity_wpmk");
                l.area_factor = lr.number("area_factor", 1.0);
                lr.finish();
                stack.layers.push_back(l);
            }
        }
    } else if (r.ok()) {
        errors.push_back(r.at("layers") + ": required");
    }
    r.finish();
    return stack;
}

json to_json(const CoolantProps& c) {
    return {{"name", c.name},
            {"density_kgpm3", c.density},
            {"viscosity_pas", c.dynamic_viscosity},
            {"specific_heat_jpkgk", c.specific_heat},
            {"conductivity_wpmk", c.thermal_conductivity},
            {"reference_temperature_c", c.reference_temperature}};
}

json to_json(const DieStack& stack) {
    json layers = json::array();
    for (const auto& l : stack.layers) {
        layers.push_back({{"name", l.name},
                          {"thickness_m", l.thickness},
                          {"conductivity_wpmk", l.conductivity},
                          {"area_factor", l.area_factor}});
    }
    return {{"layers", layers}};
}

json to_json(const HydraulicsReport& r) {
    return {{"reynolds", r.reynolds},
            {"regime", to_string(r.regime)},
            {"friction_factor", r.friction_factor},
            {"pressure_drop_pa", r.pressure_drop},
            {"mass_flow_kgps", r.mass_flow_total},
            {"transition_velocity_mps", r.transition_velocity}};
}

json to_json(const ThermalReport& r) {
    json modules = json::array();
    for (const auto& m : r.per_module) {
        modules.push_back({{"id", m.id},
                           {"power_w", m.power},
                           {"junction_temperature_c", m.junction_temperature},
                           {"local_coolant_temperature_c", m.local_coolant_temperature},
                           {"resistance_kpw",
                            {{"stack", m.resistance.stack},
                             {"spread", m.resistance.spread},
                             {"cover", m.resistance.cover},
                             {"convection", m.resistance.convection}}}});
    }
    return {{"per_module", modules},
            {"coolant_outlet_c", r.coolant_outlet},
            {"t_max_c", r.t_max},
            {"heat_transfer_coefficient_wpm2k", r.heat_transfer_coefficient},
            {"nusselt", r.nusselt},
            {"reynolds", r.reynolds},
            {"mass_flow_kgps", r.mass_flow}};
}

json to_json(const FvSolution& s) {
    json profiles = json::array();
    for (const auto& p : s.coolant_profile) profiles.push_back(p);
    return {{"cells", json::array({s.cells.x(), s.cells.y(), s.cells.z()})},
            {"spacing_m", json::array({s.spacing.x(), s.spacing.y(), s.spacing.z()})},
            {"t_max_c", s.t_max},
            {"t_min_c", s.t_min},
            {"residual", s.residual},
            {"residual_history", s.residual_history},
            {"iterations", s.iterations},
            {"linear_iterations", s.linear_iterations},
            {"total_power_w", s.total_power},
            {"convective_heat_w", s.convective_heat},
            {"caloric_heat_w", s.caloric_heat},
            {"energy_imbalance_w", s.energy_imbalance},
            {"coolant_outlet_mixed_c", s.coolant_outlet_mixed},
            {"coolant_profiles_c", profiles}};
}

json to_json(const MeshStudy& study) {
    json rows = json::array();
    for (const auto& r : study.rows) {
        rows.push_back({{"resolution_m", r.resolution},
                        {"cells", r.cells},
                        {"t_max_c", r.t_max},
                        {"delta_k", r.delta ? json(*r.delta) : json(nullptr)}});
    }
    return {{"rows", rows}, {"converged", study.converged}, {"threshold_k", kMeshConvergenceDelta}};
}

namespace {

json row_json(const StudyRow& r) {
    return {{"material", r.design.material},
            {"shape", r.design.shape},
            {"channels_per_row", r.design.channels_per_row},
            {"channel_dim_m", r.design.channel_dimension},
            {"cover_m", r.design.cover_thickness},
            {"thickness_m", r.design.thickness},
            {"v_mps", r.design.velocity},
            {"t_max_c", number_or_null(r.t_max)},
            {"dp_pa", r.pressure_drop},
            {"mass_kg", r.mass},
            {"feasible", r.feasible},
            {"evaluated", r.evaluated}};
}

} // namespace

json to_json(const StudyResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) rows.push_back(row_json(r));
    return {{"rows", rows}, {"best", result.best ? row_json(*result.best) : json(nullptr)}};
}

std::string study_csv(const StudyResult& result) {
    std::ostringstream os;
    os << "material,shape,channels_per_row,channel_dim_m,cover_m,thickness_m,v_mps,t_max_C,dp_Pa,mass_kg,feasible\n";
    for (const auto& r : result.rows) {
        os << r.design.material << ',' << r.design.shape << ',' << r.design.channels_per_row << ','
           << format_double(r.design.channel_dimension) << ',' << format_double(r.design.cover_thickness)
           << ',' << format_double(r.design.thickness) << ',' << format_double(r.design.velocity) << ','
           << (r.evaluated ? format_double(r.t_max) : std::string{}) << ','
           << format_double(r.pressure_drop) << ',' << format_double(r.mass) << ','
           << (r.feasible ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string mesh_study_csv(const MeshStudy& study) {
    std::ostringstream os;
    os << "cells,t_max_C,delta_K\n";
    for (const auto& r : study.rows) {
        os << r.cells << ',' << format_double(r.t_max) << ','
           << (r.delta ? format_double(*r.delta) : std::string{}) << '\n';
    }
    return os.str();
}

std::string thermal_csv(const ThermalReport& report) {
    std::ostringstream os;
    os << "id,power_W,junction_C,coolant_C,r_stack_KpW,r_spread_KpW,r_cover_KpW,r_conv_KpW\n";
    for (const auto& m : report.per_module) {
        os << m.id << ',' << format_double(m.power) << ',' << format_double(m.junction_temperature) << ','
           << format_double(m.local_coolant_temperature) << ',' << format_double(m.resistance.stack) << ','
           << format_double(m.resistance.spread) << ',' << format_double(m.resistance.cover) << ','
           << format_double(m.resistance.convection) << '\n';
    }
    return os.str();
}

std::string coolant_profile_csv(const FvSolution& solution, const Grid& grid) {
    std::ostringstream os;
    os << "stream,station,x_m,t_coolant_C\n";
    for (std::size_t s = 0; s < solution.coolant_profile.size(); ++s) {
        const auto& profile = solution.coolant_profile[s];
        const int first = s < grid.streams.size() ? grid.streams[s].first_station_x : 0;
        for (std::size_t st = 0; st < profile.size(); ++st) {
            const double x = (first + static_cast<double>(st)) * solution.spacing.x();
            os << s << ',' << st << ',' << format_double(x) << ',' << format_double(profile[st]) << '\n';
        }
    }
    return os.str();
}

} // namespace coldplate
