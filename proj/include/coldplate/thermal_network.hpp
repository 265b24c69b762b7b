#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "coldplate/geometry.hpp"
#include "coldplate/hydraulics.hpp"
#include "coldplate/properties.hpp"

namespace coldplate {

inline constexpr double kLaminarNusselt = 3.66;

struct StackLayer {
    std::string name;
    double thickness = 0.0;    // m
    double conductivity = 0.0; // W/(m K)
    double area_factor = 1.0;  // footprint growth across this layer, >= 1
    bool operator==(const StackLayer&) const = default;
};

// Layers between a die junction and the cold-plate surface, junction first.
struct DieStack {
    std::vector<StackLayer> layers;

    // SiC die, die attach, ceramic substrate, copper base, interface material.
    static DieStack default_stack();
    bool operator==(const DieStack&) const = default;
};

void check(const DieStack& stack);

struct ResistanceBreakdown {
    double stack = 0.0;      // K/W
    double spread = 0.0;
    double cover = 0.0;
    double convection = 0.0;
    double total() const { return stack + spread + cover + convection; }
};

struct ModuleThermal {
    std::string id;
    double power = 0.0;                     // W
    double junction_temperature = 0.0;      // degC
    double local_coolant_temperature = 0.0; // degC
    ResistanceBreakdown resistance;
};

struct ThermalReport {
    std::vector<ModuleThermal> per_module;
    double coolant_outlet = 0.0; // degC
    double t_max = 0.0;          // degC
    double heat_transfer_coefficient = 0.0; // W/(m^2 K)
    double nusselt = 0.0;
    double reynolds = 0.0;
    double mass_flow = 0.0; // kg/s
};

// Constant 3.66 up to the transition point, Dittus-Boelter (heating) above.
template <typename Scalar>
Scalar nusselt(Scalar re, Scalar pr) {
    if (!(re > Scalar(0)) || !(pr > Scalar(0)))
        throw InvalidInputError("Nusselt correlation needs positive Re and Pr");
    using std::pow;
    if (classify(re) == FlowRegime::laminar) return Scalar(kLaminarNusselt);
    return Scalar(0.023) * pow(re, Scalar(0.8)) * pow(pr, Scalar(0.4));
}

double heat_transfer_coefficient(const CoolantProps& coolant, double hydraulic_diameter,
                                 double velocity);
double heat_transfer_coefficient(const CoolantProps& coolant, const ChannelShape& shape,
                                 double velocity);

// Bulk outlet temperature from an energy balance.
double coolant_outlet(const CoolantProps& coolant, double mass_flow, double inlet, double total_power);

// One-dimensional conduction through a rectangular footprint (a x b) that grows
// by 45 degrees on every side, each dimension capped at (cap_a, cap_b).
double cone_resistance(double a, double b, double depth, double cap_a, double cap_b,
                       double conductivity);

double stack_resistance(const DieStack& stack, const DieSource& die);

// Reduced-order junction temperatures for every module.
ThermalReport solve_network(const Assembly& assembly, const CoolantProps& coolant,
                            const FlowCondition& flow, const DieStack& stack);

} // namespace coldplate
