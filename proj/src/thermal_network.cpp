#include "coldplate/thermal_network.hpp"

#include <algorithm>
#include <limits>

namespace coldplate {

DieStack DieStack::default_stack() {
    return DieStack{{
        {"sic-die", 0.35e-3, 370.0, 1.0},
        {"die-attach", 0.10e-3, 50.0, 1.0},
        {"ceramic-substrate", 0.63e-3, 170.0, 1.0},
        {"base", 3.0e-3, 387.6, 1.0},
        {"interface", 0.10e-3, 5.0, 1.0},
    }};
}

void check(const DieStack& stack) {
    if (stack.layers.empty()) throw InvalidInputError("die stack needs at least one layer");
    for (const auto& l : stack.layers) {
        if (!(l.thickness > 0) || !(l.conductivity > 0)) {
            throw InvalidInputError("stack layer '" + l.name + "' needs positive thickness and conductivity");
        }
        if (!(l.area_factor >= 1.0)) {
            throw InvalidInputError("stack layer '" + l.name + "' area_factor must be >= 1");
        }
    }
}

double heat_transfer_coefficient(const CoolantProps& coolant, double hydraulic_diameter,
                                 double velocity) {
    if (!(velocity > 0)) throw ZeroFlowError("heat transfer coefficient needs a positive velocity");
    const double re = reynolds(coolant, velocity, hydraulic_diameter);
    return nusselt(re, coolant.prandtl()) * coolant.thermal_conductivity / hydraulic_diameter;
}

double heat_transfer_coefficient(const CoolantProps& coolant, const ChannelShape& shape,
                                 double velocity) {
    return heat_transfer_coefficient(coolant, hydraulic_diameter(shape), velocity);
}

double coolant_outlet(const CoolantProps& coolant, double mass_flow, double inlet, double total_power) {
    if (!(mass_flow > 0)) throw ZeroFlowError("coolant energy balance needs a positive mass flow");
    return inlet + total_power / (mass_flow * coolant.specific_heat);
}

namespace {

// Integral of dz / ((a + 2z)(b + 2z)) over [z0, z1] with both sides growing.
double both_growing(double a, double b, double z0, double z1) {
    if (std::abs(b - a) <= 1e-15 * std::max(a, b)) {
        return 0.5 / (a + 2 * z0) - 0.5 / (a + 2 * z1);
    }
    auto prim = [&](double z) { return std::log((a + 2 * z) / (b + 2 * z)) / (2 * (b - a)); };
    return prim(z1) - prim(z0);
}

// Integral of dz / ((a + 2z) c) over [z0, z1].
double one_growing(double a, double c, double z0, double z1) {
    return std::log((a + 2 * z1) / (a + 2 * z0)) / (2 * c);
}

} // namespace

double cone_resistance(double a, double b, double depth, double cap_a, double cap_b,
                       double conductivity) {
    if (!(a > 0 && b > 0 && conductivity > 0) || depth < 0) {
        throw InvalidInputError("cone resistance needs positive footprint and conductivity");
    }
    cap_a = std::max(cap_a, a);
    cap_b = std::max(cap_b, b);
    const double za = (cap_a - a) / 2; // depth where the a side hits its cap
    const double zb = (cap_b - b) / 2;
    const double z_first = std::min({za, zb, depth});
    const double z_second = std::min(std::max(za, zb), depth);

    double integral = both_growing(a, b, 0.0, z_first);
    if (z_second > z_first) {
        if (za <= zb) {
            integral += one_growing(b, cap_a, z_first, z_second);
        } else {
            integral += one_growing(a, cap_b, z_first, z_second);
        }
    }
    if (depth > z_second) integral += (depth - z_second) / (cap_a * cap_b);
    return integral / conductivity;
}

double stack_resistance(const DieStack& stack, const DieSource& die) {
    double area = die.footprint.x() * die.footprint.y();
    double r = 0.0;
    for (const auto& l : stack.layers) {
        r += l.thickness / (l.conductivity * area);
        area *= l.area_factor;
    }
    return r;
}

namespace {

double stack_area_growth(const DieStack& stack) {
    double g = 1.0;
    for (const auto& l : stack.layers) g *= l.area_factor;
    return g;
}

double parallel(const std::vector<double>& rs) {
    double g = 0.0;
    for (double r : rs) g += 1.0 / r;
    return g > 0 ? 1.0 / g : 0.0;
}

} // namespace

ThermalReport solve_network(const Assembly& assembly, const CoolantProps& coolant,
                            const FlowCondition& flow, const DieStack& stack) {
    require_valid(assembly);
    check(coolant);
    check(stack);
    if (!(flow.inlet_velocity > 0)) throw ZeroFlowError("network solve needs a positive inlet velocity");

    const auto& plate = assembly.plate;
    const auto& layout = assembly.layout;
    const double k_plate = plate.material.thermal_conductivity;
    const double dh = hydraulic_diameter(layout.shape);

    ThermalReport report;
    report.reynolds = reynolds(coolant, flow.inlet_velocity, dh);
    report.nusselt = nusselt(report.reynolds, coolant.prandtl());
    report.heat_transfer_coefficient = report.nusselt * coolant.thermal_conductivity / dh;
    report.mass_flow = mass_flow_total(coolant, layout, flow.inlet_velocity);
    const double capacity = report.mass_flow * coolant.specific_heat;

    const double perimeter = wetted_perimeter(layout.shape);
    const double spread_depth = layout.cover_thickness + channel_depth(layout.shape);
    const double growth = std::sqrt(stack_area_growth(stack));
    const double x_begin = (plate.length - layout.channel_length) / 2;
    const double x_end = x_begin + layout.channel_length;

    auto x_center = [](const ModulePlacement& m) { return m.origin.x() + m.footprint.x() / 2; };

    for (const auto& m : assembly.modules) {
        ModuleThermal t;
        t.id = m.id;
        t.power = m.power();

        std::vector<double> r_stack;
        std::vector<double> r_cone;
        for (const auto& d : m.dies) {
            r_stack.push_back(stack_resistance(stack, d));
            r_cone.push_back(cone_resistance(d.footprint.x() * growth, d.footprint.y() * growth,
                                             spread_depth, m.footprint.x(), m.footprint.y(), k_plate));
        }
        t.resistance.stack = parallel(r_stack);
        t.resistance.spread = parallel(r_cone);

        const double module_area = m.footprint.x() * m.footprint.y();
        t.resistance.cover = layout.cover_thickness / (k_plate * module_area);

        const double x0 = std::max(m.origin.x(), x_begin);
        const double x1 = std::min(m.origin.x() + m.footprint.x(), x_end);
        if (!(x1 > x0)) {
            throw InvalidInputError("module '" + m.id + "' does not sit over any channel length");
        }
        const double wet_share = perimeter * (x1 - x0) * layout.channels_per_row;
        t.resistance.convection = 1.0 / (report.heat_transfer_coefficient * wet_share);

        // Bulk coolant at the module's mid-length: everything upstream plus
        // half of the heat picked up at this streamwise station.
        const double xc = x_center(m);
        double absorbed = 0.0;
        for (const auto& other : assembly.modules) {
            const double xo = x_center(other);
            if (std::abs(xo - xc) <= 1e-12) {
                absorbed += 0.5 * other.power();
            } else if (xo < xc) {
                absorbed += other.power();
            }
        }
        t.local_coolant_temperature = flow.inlet_temperature + absorbed / capacity;
        t.junction_temperature = t.local_coolant_temperature + t.power * t.resistance.total();
        report.per_module.push_back(std::move(t));
    }

    report.coolant_outlet =
        coolant_outlet(coolant, report.mass_flow, flow.inlet_temperature, assembly.total_power());
    report.t_max = report.per_module.empty() ? flow.inlet_temperature
                                             : -std::numeric_limits<double>::infinity();
    for (const auto& t : report.per_module) report.t_max = std::max(report.t_max, t.junction_temperature);
    return report;
}

} // namespace coldplate
