#include "coldplate/hydraulics.hpp"

namespace coldplate {

std::string to_string(FlowRegime regime) {
    return regime == FlowRegime::laminar ? "laminar" : "turbulent";
}

double pressure_drop(const CoolantProps& coolant, const ChannelLayout& layout, double velocity,
                     double minor_loss_k) {
    if (minor_loss_k < 0) throw InvalidInputError("minor loss coefficient must be nonnegative");
    const double dh = hydraulic_diameter(layout.shape);
    const double f = friction_factor(reynolds(coolant, velocity, dh));
    const double dynamic = coolant.density * velocity * velocity / 2;
    return f * (layout.channel_length / dh) * dynamic + minor_loss_k * dynamic;
}

double mass_flow_total(const CoolantProps& coolant, const ChannelLayout& layout, double velocity) {
    if (velocity < 0) throw InvalidInputError("velocity must be nonnegative");
    return coolant.density * velocity * cross_section_area(layout.shape) * layout.channel_count();
}

HydraulicsReport analyze_hydraulics(const CoolantProps& coolant, const ChannelLayout& layout,
                                    const FlowCondition& flow, double minor_loss_k) {
    HydraulicsReport r;
    const double dh = hydraulic_diameter(layout.shape);
    r.reynolds = reynolds(coolant, flow.inlet_velocity, dh);
    r.regime = classify(r.reynolds);
    r.transition_velocity = transition_velocity(coolant, layout.shape);
    r.mass_flow_total = mass_flow_total(coolant, layout, flow.inlet_velocity);
    if (flow.inlet_velocity > 0) {
        r.friction_factor = friction_factor(r.reynolds);
        r.pressure_drop = pressure_drop(coolant, layout, flow.inlet_velocity, minor_loss_k);
    }
    return r;
}

} // namespace coldplate
