#include "coldplate/config.hpp"

#include <algorithm>

#include "coldplate/presets.hpp"
#include "coldplate/serialization.hpp"
#include "json_reader.hpp"

namespace coldplate {

using detail::ObjectReader;

std::string to_string(Action action) {
    switch (action) {
    case Action::report: return "report";
    case Action::sweep: return "sweep";
    case Action::optimize: return "optimize";
    case Action::solve_fv: return "solve-fv";
    case Action::mesh_study: return "mesh-study";
    }
    return "unknown";
}

std::optional<Action> parse_action(std::string_view text) {
    for (auto a : {Action::report, Action::sweep, Action::optimize, Action::solve_fv, Action::mesh_study}) {
        if (text == to_string(a)) return a;
    }
    return std::nullopt;
}

EvaluationContext RunConfig::context(Evaluator evaluator) const {
    EvaluationContext ctx;
    ctx.coolant = coolant;
    ctx.stack = stack;
    ctx.minor_loss_k = minor_loss_k;
    ctx.evaluator = evaluator;
    ctx.fv_resolution = resolution;
    ctx.fv_settings = solver;
    return ctx;
}

namespace {

std::optional<SweepAxis> parse_axis(std::string_view s) {
    for (auto a : {SweepAxis::velocity, SweepAxis::material, SweepAxis::channel_shape,
                   SweepAxis::channel_count, SweepAxis::cover_thickness}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

std::optional<Evaluator> parse_evaluator(std::string_view s) {
    if (s == "network") return Evaluator::network;
    if (s == "fv") return Evaluator::fv;
    return std::nullopt;
}

Evaluator read_evaluator(ObjectReader& r, std::vector<std::string>& errors) {
    const auto text = r.string("evaluator");
    if (!text) return Evaluator::network;
    const auto e = parse_evaluator(*text);
    if (!e) {
        errors.push_back(r.at("evaluator") + ": expected 'network' or 'fv'");
        return Evaluator::network;
    }
    return *e;
}

std::vector<double> number_list(const nlohmann::json* j, const std::string& path,
                                 std::vector<std::string>& errors) {
    std::vector<double> out;
    if (j == nullptr) return out;
    if (!j->is_array()) {
        errors.push_back(path + ": expected an array of numbers");
        return out;
    }
    for (const auto& v : *j) {
        if (!v.is_number()) {
            errors.push_back(path + ": expected an array of numbers");
            return {};
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void read_sweep(const nlohmann::json& j, RunConfig& cfg, std::vector<std::string>& errors) {
    ObjectReader r(j, "sweep", errors);
    const auto axis_text = r.required_string("axis");
    const auto axis = parse_axis(axis_text);
    if (!axis && r.ok() && !axis_text.empty()) {
        errors.push_back("sweep.axis: expected velocity, material, channel_shape, channel_count or cover_thickness");
    }
    cfg.sweep.axis = axis.value_or(SweepAxis::velocity);
    cfg.sweep.evaluator = read_evaluator(r, errors);
    const auto* values = r.child("values");
    if (values == nullptr || !values->is_array() || values->empty()) {
        if (r.ok()) errors.push_back("sweep.values: expected a non-empty array");
    } else if (axis) {
        for (std::size_t i = 0; i < values->size(); ++i) {
            const auto& v = (*values)[i];
            const std::string at = "sweep.values[" + std::to_string(i) + "]";
            switch (*axis) {
            case SweepAxis::velocity:
            case SweepAxis::cover_thickness:
                if (!v.is_number() || !(v.get<double>() > 0)) {
                    errors.push_back(at + ": expected a positive number");
                } else {
                    cfg.sweep.values.emplace_back(v.get<double>());
                }
                break;
            case SweepAxis::channel_count:
                if (!v.is_number_integer() || v.get<int>() < 1) {
                    errors.push_back(at + ": expected a positive integer");
                } else {
                    cfg.sweep.values.emplace_back(v.get<int>());
                }
                break;
            case SweepAxis::material:
                if (!v.is_string()) {
                    errors.push_back(at + ": expected a material name");
                } else if (!cfg.materials.contains(v.get<std::string>())) {
                    errors.push_back(at + ": unknown material '" + v.get<std::string>() + "'");
                } else {
                    cfg.sweep.values.emplace_back(cfg.materials.get(v.get<std::string>()));
                }
                break;
            case SweepAxis::channel_shape: {
                const std::size_t before = errors.size();
                auto shape = shape_from_json(v, at, errors);
                if (errors.size() == before) {
                    try {
                        check(shape);
                        cfg.sweep.values.emplace_back(shape);
                    } catch (const Error& e) {
                        errors.push_back(at + ": " + e.what());
                    }
                }
                break;
            }
            }
        }
    }
    r.finish();
}

void read_optimize(const nlohmann::json& j, RunConfig& cfg, std::vector<std::string>& errors) {
    ObjectReader r(j, "optimize", errors);
    auto& o = cfg.optimize;
    if (const auto* mats = r.child("materials")) {
        o.materials.clear();
        if (!mats->is_array()) {
            errors.push_back("optimize.materials: expected an array of names");
        } else {
            for (const auto& m : *mats) {
                if (!m.is_string()) {
                    errors.push_back("optimize.materials: expected an array of names");
                    break;
                }
                o.materials.push_back(m.get<std::string>());
            }
        }
    }
    if (const auto* counts = r.child("channel_counts")) {
        o.channel_counts.clear();
        if (!counts->is_array()) {
            errors.push_back("optimize.channel_counts: expected an array of integers");
        } else {
            for (const auto& c : *counts) {
                if (!c.is_number_integer() || c.get<int>() < 1) {
                    errors.push_back("optimize.channel_counts: expected positive integers");
                    break;
                }
                o.channel_counts.push_back(c.get<int>());
            }
        }
    }
    if (const auto* covers = r.child("cover_thicknesses_m")) {
        o.cover_thicknesses = number_list(covers, "optimize.cover_thicknesses_m", errors);
    }
    o.v_min = r.number("v_min_mps", o.v_min);
    o.v_max = r.number("v_max_mps", o.v_max);
    o.v_step = r.number("v_step_mps", o.v_step);
    o.min_web = r.number("min_web_m", o.min_web);
    o.evaluator = read_evaluator(r, errors);
    r.finish();
}

} // namespace

RunConfig parse_config(std::string_view text, std::optional<Action> action) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ConfigError({"parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + e.what()});
    }

    std::vector<std::string> errors;
    RunConfig cfg;
    ObjectReader root(j, "", errors);
    if (!root.ok()) throw ConfigError(errors);

    if (const auto doc_action = root.string("action")) {
        const auto parsed = parse_action(*doc_action);
        if (!parsed) {
            errors.push_back("action: unknown action '" + *doc_action + "'");
        } else if (action && *action != *parsed) {
            errors.push_back("action: document says '" + *doc_action + "' but the command line asks for '" +
                             to_string(*action) + "'");
        } else {
            action = parsed;
        }
    }
    if (!action) {
        if (errors.empty()) errors.push_back("action: required (report, sweep, optimize, solve-fv or mesh-study)");
    } else {
        cfg.action = *action;
    }

    if (const auto* m = root.child("materials")) {
        try {
            cfg.materials.merge(*m);
            cfg.material_overrides = *m;
        } catch (const Error& e) {
            errors.push_back(std::string("materials: ") + e.what());
        }
    }

    const bool has_preset = root.has("preset");
    const bool has_assembly = root.has("assembly");
    if (has_preset == has_assembly) {
        errors.push_back("exactly one of 'preset' or 'assembly' is required");
        root.child("preset");
        root.child("assembly");
    } else if (has_preset) {
        cfg.preset = root.string("preset");
        if (cfg.preset) {
            try {
                cfg.assembly = preset(*cfg.preset);
                cfg.assembly.plate.material = cfg.materials.get(cfg.assembly.plate.material.name);
            } catch (const Error& e) {
                errors.push_back(std::string("preset: ") + e.what() + " (known: primary_side, " +
                                 "primary_side_initial, secondary_side)");
            }
        }
    } else {
        cfg.assembly = assembly_from_json(*root.child("assembly"), cfg.materials, "assembly", errors);
    }

    if (const auto name = root.string("material")) {
        if (cfg.materials.contains(*name)) {
            cfg.assembly.plate.material = cfg.materials.get(*name);
        } else {
            errors.push_back("material: unknown material '" + *name + "'");
        }
    }

    if (const auto* c = root.child("coolant")) cfg.coolant = coolant_from_json(*c, cfg.coolant, "coolant", errors);

    if (const auto* f = root.child("flow")) {
        ObjectReader r(*f, "flow", errors);
        const auto v_short = r.number("v");
        const auto v_long = r.number("v_mps");
        if (v_short && v_long) errors.push_back("flow: give either 'v' or 'v_mps', not both");
        cfg.velocity = v_long ? v_long : v_short;
        cfg.inlet_temperature = r.number("inlet_c", cfg.inlet_temperature);
        r.finish();
    }

    if (const auto* s = root.child("stack")) cfg.stack = stack_from_json(*s, "stack", errors);

    if (const auto* h = root.child("hydraulics")) {
        ObjectReader r(*h, "hydraulics", errors);
        cfg.minor_loss_k = r.number("minor_loss_k", cfg.minor_loss_k);
        r.finish();
    }

    if (const auto* s = root.child("solver")) {
        ObjectReader r(*s, "solver", errors);
        cfg.solver.tol = r.number("tol", cfg.solver.tol);
        cfg.solver.max_iters = r.integer("max_iters").value_or(cfg.solver.max_iters);
        cfg.solver.outer_tol = r.number("outer_tol_k", cfg.solver.outer_tol);
        cfg.solver.max_outer = r.integer("max_outer").value_or(cfg.solver.max_outer);
        cfg.resolution = r.number("resolution_m", cfg.resolution);
        r.finish();
    }

    if (const auto* m = root.child("mesh_study")) {
        ObjectReader r(*m, "mesh_study", errors);
        if (const auto* res = r.child("resolutions_m")) {
            cfg.mesh_resolutions = number_list(res, "mesh_study.resolutions_m", errors);
        }
        r.finish();
    }

    if (const auto* l = root.child("limits")) {
        ObjectReader r(*l, "limits", errors);
        cfg.limits.t_max_limit = r.number("t_max_limit_c", cfg.limits.t_max_limit);
        cfg.limits.pressure_budget = r.number("pressure_budget_pa", cfg.limits.pressure_budget);
        cfg.limits.v_max = r.number("v_max_mps", cfg.limits.v_max);
        r.finish();
    }

    const auto* sweep = root.child("sweep");
    if (sweep != nullptr) read_sweep(*sweep, cfg, errors);
    if (const auto* o = root.child("optimize")) read_optimize(*o, cfg, errors);

    if (const auto* o = root.child("output")) {
        ObjectReader r(*o, "output", errors);
        cfg.output_dir = r.string("dir");
        r.finish();
    }

    root.finish();
    if (!errors.empty()) throw ConfigError(errors);

    // Semantic checks on the fully read document.
    for (auto& v : validate(cfg.assembly)) errors.push_back("assembly: " + v);
    try {
        check(cfg.coolant);
    } catch (const Error& e) {
        errors.emplace_back(e.what());
    }
    try {
        check(cfg.stack);
    } catch (const Error& e) {
        errors.emplace_back(e.what());
    }
    if (cfg.minor_loss_k < 0) errors.push_back("hydraulics.minor_loss_k: must be nonnegative");
    if (!(cfg.solver.tol > 0)) errors.push_back("solver.tol: must be positive");
    if (cfg.solver.max_iters < 1) errors.push_back("solver.max_iters: must be at least 1");
    if (!(cfg.solver.outer_tol > 0)) errors.push_back("solver.outer_tol_k: must be positive");
    if (cfg.solver.max_outer < 1) errors.push_back("solver.max_outer: must be at least 1");
    if (!(cfg.resolution > 0)) errors.push_back("solver.resolution_m: must be positive");
    if (!(cfg.limits.t_max_limit > -273.15) || !(cfg.limits.pressure_budget > 0) || !(cfg.limits.v_max > 0)) {
        errors.push_back("limits: pressure budget and velocity limit must be positive");
    }

    const bool needs_velocity = cfg.action == Action::report || cfg.action == Action::solve_fv ||
                                cfg.action == Action::mesh_study ||
                                (cfg.action == Action::sweep && cfg.sweep.axis != SweepAxis::velocity);
    if (needs_velocity && !cfg.velocity) errors.push_back("flow.v_mps: required for " + to_string(cfg.action));
    if (cfg.velocity && !(*cfg.velocity > 0)) errors.push_back("flow.v_mps: must be positive");

    if (cfg.action == Action::sweep && sweep == nullptr) errors.push_back("sweep: required for the sweep action");
    if (cfg.action == Action::mesh_study) {
        if (cfg.mesh_resolutions.size() < 3) {
            errors.push_back("mesh_study.resolutions_m: at least three resolutions are required");
        }
        for (std::size_t i = 0; i < cfg.mesh_resolutions.size(); ++i) {
            if (!(cfg.mesh_resolutions[i] > 0) ||
                (i > 0 && !(cfg.mesh_resolutions[i] < cfg.mesh_resolutions[i - 1]))) {
                errors.push_back("mesh_study.resolutions_m: must be positive and strictly descending");
                break;
            }
        }
    }
    if (cfg.action == Action::optimize) {
        const auto& o = cfg.optimize;
        for (const auto& m : o.materials) {
            if (!cfg.materials.contains(m)) errors.push_back("optimize.materials: unknown material '" + m + "'");
        }
        if (o.materials.empty() || o.channel_counts.empty() || o.cover_thicknesses.empty()) {
            errors.push_back("optimize: materials, channel_counts and cover_thicknesses_m must be non-empty");
        }
        if (std::any_of(o.cover_thicknesses.begin(), o.cover_thicknesses.end(), [](double c) { return !(c > 0); })) {
            errors.push_back("optimize.cover_thicknesses_m: must be positive");
        }
        if (!(o.v_min > 0) || !(o.v_step > 0) || o.v_max < o.v_min) {
            errors.push_back("optimize: need 0 < v_min_mps <= v_max_mps and v_step_mps > 0");
        }
        if (!(o.min_web >= 0)) errors.push_back("optimize.min_web_m: must be nonnegative");
    }
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

nlohmann::json resolved_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["action"] = to_string(cfg.action);
    j["assembly"] = to_json(cfg.assembly);
    if (!cfg.material_overrides.empty()) j["materials"] = cfg.material_overrides;
    j["coolant"] = to_json(cfg.coolant);
    nlohmann::json flow = {{"inlet_c", cfg.inlet_temperature}};
    if (cfg.velocity) flow["v_mps"] = *cfg.velocity;
    j["flow"] = flow;
    j["stack"] = to_json(cfg.stack);
    j["hydraulics"] = {{"minor_loss_k", cfg.minor_loss_k}};
    j["solver"] = {{"tol", cfg.solver.tol},
                   {"max_iters", cfg.solver.max_iters},
                   {"outer_tol_k", cfg.solver.outer_tol},
                   {"max_outer", cfg.solver.max_outer},
                   {"resolution_m", cfg.resolution}};
    j["mesh_study"] = {{"resolutions_m", cfg.mesh_resolutions}};
    j["limits"] = {{"t_max_limit_c", cfg.limits.t_max_limit},
                   {"pressure_budget_pa", cfg.limits.pressure_budget},
                   {"v_max_mps", cfg.limits.v_max}};
    if (cfg.action == Action::sweep) {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& v : cfg.sweep.values) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, SolidMaterial>) values.push_back(x.name);
                    else if constexpr (std::is_same_v<T, ChannelShape>) values.push_back(to_json(x));
                    else values.push_back(x);
                },
                v);
        }
        j["sweep"] = {{"axis", to_string(cfg.sweep.axis)},
                      {"values", values},
                      {"evaluator", to_string(cfg.sweep.evaluator)}};
    }
    if (cfg.action == Action::optimize) {
        const auto& o = cfg.optimize;
        j["optimize"] = {{"materials", o.materials},
                         {"channel_counts", o.channel_counts},
                         {"cover_thicknesses_m", o.cover_thicknesses},
                         {"v_min_mps", o.v_min},
                         {"v_max_mps", o.v_max},
                         {"v_step_mps", o.v_step},
                         {"min_web_m", o.min_web},
                         {"evaluator", to_string(o.evaluator)}};
    }
    if (cfg.output_dir) j["output"] = {{"dir", *cfg.output_dir}};
    return j;
}

} // namespace coldplate
