#include "coldplate/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>
#include <tuple>

#include "coldplate/format.hpp"

namespace coldplate {

std::string to_string(Evaluator e) { return e == Evaluator::network ? "network" : "fv"; }

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::velocity: return "velocity";
    case SweepAxis::material: return "material";
    case SweepAxis::channel_shape: return "channel_shape";
    case SweepAxis::channel_count: return "channel_count";
    case SweepAxis::cover_thickness: return "cover_thickness";
    }
    return "unknown";
}

bool is_feasible(const Constraints& c, double t_max, double pressure_drop, double velocity) {
    return t_max <= c.t_max_limit && pressure_drop <= c.pressure_budget && velocity <= c.v_max;
}

DesignDescriptor describe(const Assembly& assembly, const FlowCondition& flow) {
    DesignDescriptor d;
    d.material = assembly.plate.material.name;
    d.shape = shape_name(assembly.layout.shape);
    d.channels_per_row = assembly.layout.channels_per_row;
    if (const auto* r = std::get_if<Rectangular>(&assembly.layout.shape)) {
        d.channel_dimension = r->width;
    } else {
        d.channel_dimension = std::get<Semicircular>(assembly.layout.shape).radius;
    }
    d.cover_thickness = assembly.layout.cover_thickness;
    d.thickness = assembly.plate.thickness;
    d.velocity = flow.inlet_velocity;
    return d;
}

bool ranks_before(const StudyRow& a, const StudyRow& b) {
    return std::tie(a.mass, a.t_max, a.pressure_drop, a.design) <
           std::tie(b.mass, b.t_max, b.pressure_drop, b.design);
}

namespace {

double evaluate_t_max(const Assembly& assembly, const FlowCondition& flow, const EvaluationContext& ctx) {
    if (ctx.evaluator == Evaluator::network) {
        return solve_network(assembly, ctx.coolant, flow, ctx.stack).t_max;
    }
    const Grid grid = build_grid(assembly, ctx.fv_resolution);
    return solve(grid, ctx.coolant, flow, assembly.plate.material, ctx.fv_settings).t_max;
}

} // namespace

StudyRow evaluate(const Assembly& assembly, const FlowCondition& flow, const EvaluationContext& ctx,
                  const Constraints& constraints) {
    StudyRow row;
    row.design = describe(assembly, flow);
    row.mass = plate_mass(assembly);
    row.pressure_drop = pressure_drop(ctx.coolant, assembly.layout, flow.inlet_velocity, ctx.minor_loss_k);
    row.t_max = evaluate_t_max(assembly, flow, ctx);
    row.feasible = is_feasible(constraints, row.t_max, row.pressure_drop, flow.inlet_velocity);
    return row;
}

void apply(SweepAxis axis, const SweepValue& value, const ChannelLayout& count_reference,
           Assembly& assembly, FlowCondition& flow) {
    auto wrong = [&] { return InvalidInputError("sweep value type does not match axis " + to_string(axis)); };
    switch (axis) {
    case SweepAxis::velocity:
        if (!std::holds_alternative<double>(value)) throw wrong();
        flow.inlet_velocity = std::get<double>(value);
        break;
    case SweepAxis::material:
        if (!std::holds_alternative<SolidMaterial>(value)) throw wrong();
        assembly.plate.material = std::get<SolidMaterial>(value);
        break;
    case SweepAxis::channel_shape:
        if (!std::holds_alternative<ChannelShape>(value)) throw wrong();
        assembly.layout.shape = std::get<ChannelShape>(value);
        break;
    case SweepAxis::channel_count: {
        if (!std::holds_alternative<int>(value)) throw wrong();
        const int n = std::get<int>(value);
        assembly.layout.channels_per_row = n;
        assembly.layout.shape = Semicircular{equal_area_radius(count_reference, n)};
        break;
    }
    case SweepAxis::cover_thickness:
        if (!std::holds_alternative<double>(value)) throw wrong();
        assembly.layout.cover_thickness = std::get<double>(value);
        break;
    }
}

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COLDPLATE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

namespace {

std::string describe_value(const SweepValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return format_double(x);
            else if constexpr (std::is_same_v<T, int>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, SolidMaterial>) return x.name;
            else return shape_name(x);
        },
        v);
}

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Rethrows the
// failure with the lowest index.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace

StudyResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw InvalidInputError("sweep needs at least one value");
    StudyResult result;
    result.rows.resize(spec.values.size());
    parallel_for(spec.values.size(), [&](std::size_t i) {
        Assembly assembly = spec.base;
        FlowCondition flow = spec.flow;
        try {
            apply(spec.axis, spec.values[i], spec.count_reference, assembly, flow);
            result.rows[i] = evaluate(assembly, flow, spec.context, spec.constraints);
        } catch (const std::exception& e) {
            throw Error("sweep point " + std::to_string(i) + " (" + to_string(spec.axis) + " = " +
                        describe_value(spec.values[i]) + "): " + e.what());
        }
    });
    for (const auto& row : result.rows) {
        if (row.feasible && (!result.best || ranks_before(row, *result.best))) result.best = row;
    }
    return result;
}

std::vector<ScenarioStep> secondary_side_steps() {
    return {
        {1.1, 1.0e-3, 144.93},
        {1.4, 1.0e-3, 142.04},
        {1.4, 0.5e-3, 136.86},
        {2.9, 0.5e-3, 131.58},
    };
}

StudyResult secondary_side_scenario(const EvaluationContext& ctx, const Assembly& base,
                                    double inlet_temperature) {
    StudyResult result;
    for (const auto& step : secondary_side_steps()) {
        Assembly a = base;
        a.layout.cover_thickness = step.cover_thickness;
        const FlowCondition flow{step.velocity, inlet_temperature};
        result.rows.push_back(evaluate(a, flow, ctx));
    }
    for (const auto& row : result.rows) {
        if (row.feasible && (!result.best || ranks_before(row, *result.best))) result.best = row;
    }
    return result;
}

std::vector<Candidate> candidates(const DesignProblem& problem) {
    if (problem.materials.empty() || problem.channel_counts.empty() || problem.cover_thicknesses.empty()) {
        throw InvalidInputError("design problem needs materials, channel counts and cover thicknesses");
    }
    if (!(problem.v_step > 0) || !(problem.v_min > 0) || problem.v_max < problem.v_min) {
        throw InvalidInputError("design problem velocity range is invalid");
    }
    if (!(problem.constraints.pressure_budget > 0) || !(problem.constraints.v_max > 0)) {
        throw InvalidInputError("design limits must be positive");
    }
    std::vector<double> velocities;
    const auto steps = static_cast<long>(std::floor((problem.v_max - problem.v_min) / problem.v_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        // Rounded to the micro-metre per second so 0.5 + 3 x 0.3 prints as 1.4.
        velocities.push_back(std::round((problem.v_min + i * problem.v_step) * 1e6) / 1e6);
    }

    std::vector<Candidate> out;
    for (const auto& material : problem.materials) {
        for (int count : problem.channel_counts) {
            const double radius = equal_area_radius(problem.reference, count);
            for (double cover : problem.cover_thicknesses) {
                Assembly a = problem.base;
                a.plate.material = material;
                a.layout.channels_per_row = count;
                a.layout.shape = Semicircular{radius};
                a.layout.cover_thickness = cover;
                a.plate.thickness = a.layout.rows * radius + 2 * cover + (a.layout.rows - 1) * problem.min_web;
                for (double v : velocities) {
                    out.push_back({a, FlowCondition{v, problem.inlet_temperature}});
                }
            }
        }
    }
    return out;
}

StudyResult optimize(const DesignProblem& problem, const EvaluationContext& ctx) {
    const auto points = candidates(problem);
    StudyResult result;
    result.rows.resize(points.size());

    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& row = result.rows[i];
        row.design = describe(points[i].assembly, points[i].flow);
        row.mass = plate_mass(points[i].assembly);
        row.pressure_drop = pressure_drop(ctx.coolant, points[i].assembly.layout,
                                          points[i].flow.inlet_velocity, ctx.minor_loss_k);
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return result.rows[a].mass < result.rows[b].mass; });

    for (std::size_t idx : order) {
        auto& row = result.rows[idx];
        // Equal mass can still win on temperature, so only strictly heavier points are skipped.
        if (result.best && row.mass > result.best->mass) {
            row.evaluated = false;
            row.t_max = std::numeric_limits<double>::quiet_NaN();
            row.feasible = false;
            continue;
        }
        row.t_max = evaluate_t_max(points[idx].assembly, points[idx].flow, ctx);
        row.feasible = is_feasible(problem.constraints, row.t_max, row.pressure_drop,
                                   points[idx].flow.inlet_velocity);
        if (row.feasible && (!result.best || ranks_before(row, *result.best))) result.best = row;
    }
    return result;
}

} // namespace coldplate
