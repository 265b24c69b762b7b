#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coldplate/fv_conduction.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/hydraulics.hpp"
#include "coldplate/properties.hpp"
#include "coldplate/studies.hpp"
#include "coldplate/thermal_network.hpp"

namespace coldplate {

enum class Action { report, sweep, optimize, solve_fv, mesh_study };

std::string to_string(Action action);
std::optional<Action> parse_action(std::string_view text);

struct SweepSection {
    SweepAxis axis = SweepAxis::velocity;
    std::vector<SweepValue> values;
    Evaluator evaluator = Evaluator::network;
};

struct OptimizeSection {
    std::vector<std::string> materials{"copper", "aluminum", "stainless-steel"};
    std::vector<int> channel_counts{3, 6};
    std::vector<double> cover_thicknesses{1.0e-3, 0.5e-3};
    double v_min = 0.5;
    double v_max = 2.9;
    double v_step = 0.1;
    double min_web = 1.0e-3;
    Evaluator evaluator = Evaluator::network;
};

// Fully resolved run description. JSON keys carry SI unit suffixes.
struct RunConfig {
    Action action = Action::report;
    std::optional<std::string> preset; // informational; assembly holds the resolved design
    Assembly assembly;
    nlohmann::json material_overrides = nlohmann::json::object();
    MaterialLibrary materials;
    CoolantProps coolant = water_at_reference();
    std::optional<double> velocity; // m/s
    double inlet_temperature = kDefaultInletTemperature;
    DieStack stack = DieStack::default_stack();
    double minor_loss_k = kDefaultMinorLossK;
    FvSettings solver;
    double resolution = 0.002; // m
    std::vector<double> mesh_resolutions{0.002, 0.0015, 0.001};
    Constraints limits;
    SweepSection sweep;
    OptimizeSection optimize;
    std::optional<std::string> output_dir;

    FlowCondition flow() const { return {velocity.value_or(0.0), inlet_temperature}; }
    EvaluationContext context(Evaluator evaluator) const;
};

// Parses and validates a JSON configuration. `action` from the command line
// takes part in validation; when the document also names one they must agree.
// Throws ConfigError listing every problem (parse errors carry line:column).
RunConfig parse_config(std::string_view text, std::optional<Action> action = std::nullopt);

// Fully resolved configuration: inline assembly and every default spelled out.
nlohmann::json resolved_json(const RunConfig& config);

struct RunArtifacts {
    std::map<std::string, std::string> files; // file name -> contents
    std::string summary;
};

// Executes the action in memory.
RunArtifacts execute(const RunConfig& config);

// Executes and writes artifacts into out_dir only after everything succeeded.
// Returns the process exit status; diagnostics go to err.
int run(const RunConfig& config, const std::string& out_dir, std::ostream& out, std::ostream& err);

} // namespace coldplate
