#pragma once

#include <cmath>
#include <string>

#include "coldplate/geometry.hpp"
#include "coldplate/properties.hpp"

namespace coldplate {

// Single switch point between laminar and turbulent flow. Re equal to the
// threshold counts as laminar.
inline constexpr double kTransitionReynolds = 2500.0;
inline constexpr double kDefaultMinorLossK = 2.0;
inline constexpr double kDefaultInletTemperature = 49.0; // degC

enum class FlowRegime { laminar, turbulent };

std::string to_string(FlowRegime regime);

struct FlowCondition {
    double inlet_velocity = 0.0;                        // m/s
    double inlet_temperature = kDefaultInletTemperature; // degC
    bool operator==(const FlowCondition&) const = default;
};

struct HydraulicsReport {
    double reynolds = 0.0;
    FlowRegime regime = FlowRegime::laminar;
    double friction_factor = 0.0;
    double pressure_drop = 0.0;   // Pa
    double mass_flow_total = 0.0; // kg/s
    double transition_velocity = 0.0; // m/s
};

template <typename Scalar>
Scalar reynolds(const CoolantProps& coolant, Scalar velocity, Scalar hydraulic_diameter) {
    if (!(hydraulic_diameter > Scalar(0))) throw InvalidInputError("hydraulic diameter must be positive");
    if (velocity < Scalar(0)) throw InvalidInputError("velocity must be nonnegative");
    return Scalar(coolant.density) * velocity * hydraulic_diameter / Scalar(coolant.dynamic_viscosity);
}

template <typename Scalar>
FlowRegime classify(Scalar re) {
    return re <= Scalar(kTransitionReynolds) ? FlowRegime::laminar : FlowRegime::turbulent;
}

// Velocity at which the channel reaches the transition Reynolds number.
template <typename Scalar>
Scalar transition_velocity(const CoolantProps& coolant, const BasicChannelShape<Scalar>& shape) {
    return Scalar(kTransitionReynolds) * Scalar(coolant.dynamic_viscosity) /
           (Scalar(coolant.density) * hydraulic_diameter(shape));
}

// Darcy friction factor: 64/Re up to the transition point, Blasius above it.
template <typename Scalar>
Scalar friction_factor(Scalar re) {
    if (!(re > Scalar(0))) throw InvalidInputError("friction factor needs a positive Reynolds number");
    using std::pow;
    if (classify(re) == FlowRegime::laminar) return Scalar(64) / re;
    return Scalar(0.316) * pow(re, Scalar(-0.25));
}

// Darcy-Weisbach drop across one channel plus lumped minor losses. Channels
// are identical and in parallel, so this is also the plate drop.
double pressure_drop(const CoolantProps& coolant, const ChannelLayout& layout, double velocity,
                     double minor_loss_k = kDefaultMinorLossK);

double mass_flow_total(const CoolantProps& coolant, const ChannelLayout& layout, double velocity);

HydraulicsReport analyze_hydraulics(const CoolantProps& coolant, const ChannelLayout& layout,
                                    const FlowCondition& flow,
                                    double minor_loss_k = kDefaultMinorLossK);

} // namespace coldplate
