#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coldplate/fv_conduction.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/hydraulics.hpp"
#include "coldplate/presets.hpp"
#include "coldplate/thermal_network.hpp"

namespace coldplate {

enum class Evaluator { network, fv };
enum class SweepAxis { velocity, material, channel_shape, channel_count, cover_thickness };

std::string to_string(Evaluator e);
std::string to_string(SweepAxis a);

inline constexpr double kDefaultTemperatureLimit = 135.0; // degC
inline constexpr double kDefaultPressureBudget = 50.0e3;  // Pa
inline constexpr double kDefaultVelocityLimit = 3.0;      // m/s

struct Constraints {
    double t_max_limit = kDefaultTemperatureLimit;
    double pressure_budget = kDefaultPressureBudget;
    double v_max = kDefaultVelocityLimit;
};

bool is_feasible(const Constraints& c, double t_max, double pressure_drop, double velocity);

// Everything an evaluation needs besides the design itself.
struct EvaluationContext {
    CoolantProps coolant = water_at_reference();
    DieStack stack = DieStack::default_stack();
    double minor_loss_k = kDefaultMinorLossK;
    Evaluator evaluator = Evaluator::network;
    double fv_resolution = 0.002; // m
    FvSettings fv_settings;
};

// Compared lexicographically in declaration order.
struct DesignDescriptor {
    std::string material;
    std::string shape;
    int channels_per_row = 0;
    double channel_dimension = 0.0; // radius, or width for rectangles (m)
    double cover_thickness = 0.0;   // m
    double thickness = 0.0;         // m
    double velocity = 0.0;          // m/s

    auto operator<=>(const DesignDescriptor&) const = default;
};

DesignDescriptor describe(const Assembly& assembly, const FlowCondition& flow);

struct StudyRow {
    DesignDescriptor design;
    double t_max = 0.0;         // degC
    double pressure_drop = 0.0; // Pa
    double mass = 0.0;          // kg
    bool feasible = false;
    bool evaluated = true; // false when the optimizer pruned the point
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::optional<StudyRow> best;
};

// Strict ordering used to pick a best design: mass, then t_max, then
// pressure drop, then descriptor.
bool ranks_before(const StudyRow& a, const StudyRow& b);

StudyRow evaluate(const Assembly& assembly, const FlowCondition& flow, const EvaluationContext& ctx,
                  const Constraints& constraints = {});

using SweepValue = std::variant<double, int, SolidMaterial, ChannelShape>;

struct SweepSpec {
    Assembly base = primary_side();
    FlowCondition flow{1.1, kDefaultInletTemperature};
    EvaluationContext context;
    SweepAxis axis = SweepAxis::velocity;
    std::vector<SweepValue> values;
    Constraints constraints;
    // Channel-count points size their semicircular radius for equal wetted
    // area with this rectangular layout.
    ChannelLayout count_reference = rectangular_reference_layout(0.480);
};

// Applies one sweep value to a copy of the base design.
void apply(SweepAxis axis, const SweepValue& value, const ChannelLayout& count_reference,
           Assembly& assembly, FlowCondition& flow);

// One row per value, in the order given. Points run on worker threads.
StudyResult run_sweep(const SweepSpec& spec);

// Number of worker threads for sweeps; honours COLDPLATE_THREADS.
std::size_t worker_count();

struct ScenarioStep {
    double velocity = 0.0;        // m/s
    double cover_thickness = 0.0; // m
    double reference_t_max = 0.0; // degC, reference CFD value for comparison only
};

// Baseline 1.1 m/s, then 1.4 m/s, cover 1.0 -> 0.5 mm, then 2.9 m/s.
std::vector<ScenarioStep> secondary_side_steps();

StudyResult secondary_side_scenario(const EvaluationContext& ctx = {},
                                    const Assembly& base = secondary_side(),
                                    double inlet_temperature = kDefaultInletTemperature);

struct DesignProblem {
    Assembly base = primary_side();
    std::vector<SolidMaterial> materials;
    std::vector<int> channel_counts;
    std::vector<double> cover_thicknesses;
    double v_min = 0.5;
    double v_max = 2.9;
    double v_step = 0.1;
    double inlet_temperature = kDefaultInletTemperature;
    Constraints constraints;
    ChannelLayout reference = rectangular_reference_layout(0.480);
    // Solid between the two channel rows when the plate thickness is derived.
    double min_web = 1.0e-3;
};

struct Candidate {
    Assembly assembly;
    FlowCondition flow;
};

// Enumerates material x channel count x cover x velocity. The plate thickness
// is the thinnest that holds the channels: rows depth + 2 cover + web.
std::vector<Candidate> candidates(const DesignProblem& problem);

// Lightest feasible design. Points heavier than the incumbent are not
// thermally evaluated; the result equals exhaustive enumeration.
StudyResult optimize(const DesignProblem& problem, const EvaluationContext& ctx = {});

} // namespace coldplate
