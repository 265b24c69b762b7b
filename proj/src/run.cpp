#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "coldplate/config.hpp"
#include "coldplate/serialization.hpp"

namespace coldplate {

namespace {

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string summary_line(const std::string& label, const std::string& value) {
    std::ostringstream os;
    os << "  " << std::left << std::setw(22) << label << value << "\n";
    return os.str();
}

std::string hydraulics_summary(const HydraulicsReport& h) {
    return summary_line("pressure drop", fixed(h.pressure_drop / 1000.0, 3) + " kPa") +
           summary_line("regime", to_string(h.regime)) + summary_line("Reynolds", fixed(h.reynolds, 0)) +
           summary_line("mass flow", fixed(h.mass_flow_total, 4) + " kg/s");
}

std::string study_summary(const StudyResult& r) {
    std::ostringstream os;
    os << "  " << r.rows.size() << " points, "
       << std::count_if(r.rows.begin(), r.rows.end(), [](const StudyRow& s) { return s.feasible; })
       << " feasible\n";
    os << "  " << std::left << std::setw(17) << "material" << std::setw(13) << "shape" << std::right
       << std::setw(4) << "N" << std::setw(9) << "v m/s" << std::setw(10) << "t_max C" << std::setw(10)
       << "dP kPa" << std::setw(9) << "mass kg" << "\n";
    for (const auto& row : r.rows) {
        os << "  " << std::left << std::setw(17) << row.design.material << std::setw(13) << row.design.shape
           << std::right << std::setw(4) << row.design.channels_per_row << std::setw(9)
           << fixed(row.design.velocity, 2);
        if (row.evaluated) {
            os << std::setw(10) << fixed(row.t_max, 2) << std::setw(10) << fixed(row.pressure_drop / 1000.0, 2);
        } else {
            os << std::setw(10) << "-" << std::setw(10) << "-";
        }
        os << std::setw(9) << fixed(row.mass, 3) << (row.feasible ? "" : "  infeasible") << "\n";
    }
    if (r.best) {
        os << "  best: " << r.best->design.material << ", " << r.best->design.channels_per_row
           << " channels/row, cover " << fixed(r.best->design.cover_thickness * 1000.0, 2) << " mm, v "
           << fixed(r.best->design.velocity, 2) << " m/s, mass " << fixed(r.best->mass, 3) << " kg\n";
    } else {
        os << "  best: none (no feasible design)\n";
    }
    return os.str();
}

RunArtifacts report(const RunConfig& cfg) {
    const auto flow = cfg.flow();
    const auto hyd = analyze_hydraulics(cfg.coolant, cfg.assembly.layout, flow, cfg.minor_loss_k);
    const auto thermal = solve_network(cfg.assembly, cfg.coolant, flow, cfg.stack);
    const double mass = plate_mass(cfg.assembly);
    nlohmann::json j;
    j["action"] = "report";
    j["mass_kg"] = mass;
    j["hydraulics"] = to_json(hyd);
    j["thermal"] = to_json(thermal);
    j["feasible"] = is_feasible(cfg.limits, thermal.t_max, hyd.pressure_drop, flow.inlet_velocity);
    RunArtifacts a;
    a.files["result.json"] = dump(j);
    a.files["result.csv"] = thermal_csv(thermal);
    a.summary = summary_line("t_max", fixed(thermal.t_max, 2) + " C") + hydraulics_summary(hyd) +
                summary_line("coolant outlet", fixed(thermal.coolant_outlet, 2) + " C") +
                summary_line("plate mass", fixed(mass, 3) + " kg");
    return a;
}

RunArtifacts sweep(const RunConfig& cfg) {
    SweepSpec spec;
    spec.base = cfg.assembly;
    spec.flow = cfg.flow();
    if (!cfg.velocity) spec.flow.inlet_velocity = 1.0; // every point sets its own velocity
    spec.context = cfg.context(cfg.sweep.evaluator);
    spec.axis = cfg.sweep.axis;
    spec.values = cfg.sweep.values;
    spec.constraints = cfg.limits;
    spec.count_reference = rectangular_reference_layout(cfg.assembly.layout.channel_length);
    const auto result = run_sweep(spec);
    nlohmann::json j = to_json(result);
    j["action"] = "sweep";
    j["axis"] = to_string(spec.axis);
    j["evaluator"] = to_string(cfg.sweep.evaluator);
    RunArtifacts a;
    a.files["result.json"] = dump(j);
    a.files["result.csv"] = study_csv(result);
    a.summary = study_summary(result);
    return a;
}

RunArtifacts optimize_action(const RunConfig& cfg) {
    const auto& o = cfg.optimize;
    DesignProblem p;
    p.base = cfg.assembly;
    for (const auto& m : o.materials) p.materials.push_back(cfg.materials.get(m));
    p.channel_counts = o.channel_counts;
    p.cover_thicknesses = o.cover_thicknesses;
    p.v_min = o.v_min;
    p.v_max = o.v_max;
    p.v_step = o.v_step;
    p.inlet_temperature = cfg.inlet_temperature;
    p.constraints = cfg.limits;
    p.reference = rectangular_reference_layout(cfg.assembly.layout.channel_length);
    p.min_web = o.min_web;
    const auto result = optimize(p, cfg.context(o.evaluator));
    nlohmann::json j = to_json(result);
    j["action"] = "optimize";
    j["evaluator"] = to_string(o.evaluator);
    RunArtifacts a;
    a.files["result.json"] = dump(j);
    a.files["result.csv"] = study_csv(result);
    a.summary = study_summary(result);
    return a;
}

RunArtifacts solve_fv_action(const RunConfig& cfg) {
    const auto flow = cfg.flow();
    const auto grid = build_grid(cfg.assembly, cfg.resolution);
    const auto sol = solve(grid, cfg.coolant, flow, cfg.assembly.plate.material, cfg.solver);
    const auto hyd = analyze_hydraulics(cfg.coolant, cfg.assembly.layout, flow, cfg.minor_loss_k);
    nlohmann::json j = to_json(sol);
    j["action"] = "solve-fv";
    j["resolution_m"] = cfg.resolution;
    j["mass_kg"] = plate_mass(cfg.assembly);
    j["hydraulics"] = to_json(hyd);
    std::ostringstream vtk;
    write_field(vtk, sol);
    RunArtifacts a;
    a.files["result.json"] = dump(j);
    a.files["result.csv"] = coolant_profile_csv(sol, grid);
    a.files["field.vtk"] = vtk.str();
    a.summary = summary_line("t_max (plate)", fixed(sol.t_max, 2) + " C") + hydraulics_summary(hyd) +
                summary_line("cells", std::to_string(grid.cell_count())) +
                summary_line("coupling sweeps", std::to_string(sol.iterations)) +
                summary_line("energy imbalance", fixed(sol.energy_imbalance, 9) + " W");
    return a;
}

RunArtifacts mesh_study_action(const RunConfig& cfg) {
    const auto study = mesh_study(cfg.assembly, cfg.coolant, cfg.flow(), cfg.mesh_resolutions, cfg.solver);
    nlohmann::json j = to_json(study);
    j["action"] = "mesh-study";
    std::ostringstream os;
    for (const auto& row : study.rows) {
        os << "  " << std::setw(10) << row.cells << " cells  t_max " << fixed(row.t_max, 3) << " C";
        if (row.delta) os << "  delta " << fixed(*row.delta, 3) << " K";
        os << "\n";
    }
    os << "  " << (study.converged ? "converged" : "not converged") << "\n";
    RunArtifacts a;
    a.files["result.json"] = dump(j);
    a.files["result.csv"] = mesh_study_csv(study);
    a.summary = os.str();
    return a;
}

} // namespace

RunArtifacts execute(const RunConfig& cfg) {
    switch (cfg.action) {
    case Action::report: return report(cfg);
    case Action::sweep: return sweep(cfg);
    case Action::optimize: return optimize_action(cfg);
    case Action::solve_fv: return solve_fv_action(cfg);
    case Action::mesh_study: return mesh_study_action(cfg);
    }
    throw InvalidInputError("unknown action");
}

int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    RunArtifacts artifacts;
    try {
        artifacts = execute(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const fs::path dir(out_dir);
    std::vector<fs::path> staged;
    auto discard = [&] {
        std::error_code ec;
        for (const auto& p : staged) fs::remove(p, ec);
    };
    try {
        fs::create_directories(dir);
        for (const auto& [name, contents] : artifacts.files) {
            const auto tmp = dir / (name + ".tmp");
            staged.push_back(tmp);
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << contents;
            f.close();
            if (!f) throw std::runtime_error("cannot write " + tmp.string());
        }
        for (const auto& [name, contents] : artifacts.files) fs::rename(dir / (name + ".tmp"), dir / name);
    } catch (const std::exception& e) {
        discard();
        err << "error: " << e.what() << "\n";
        return 1;
    }

    out << to_string(cfg.action) << "\n" << artifacts.summary;
    for (const auto& [name, contents] : artifacts.files) out << "  wrote " << (dir / name).string() << "\n";
    return 0;
}

} // namespace coldplate
