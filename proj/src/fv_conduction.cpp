#include "coldplate/fv_conduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "coldplate/format.hpp"
#include "coldplate/thermal_network.hpp"

namespace coldplate {

Eigen::Vector3i Grid::ijk(int cell) const {
    const int i = cell % cells.x();
    const int j = (cell / cells.x()) % cells.y();
    const int k = cell / (cells.x() * cells.y());
    return {i, j, k};
}

std::size_t Grid::solid_count() const {
    return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), CellKind::solid));
}

double Grid::total_power() const {
    double p = 0.0;
    for (const auto& s : sources) p += s.power;
    return p;
}

namespace {

constexpr int kSubsamples = 8;

int cells_along(double extent, double resolution) {
    return std::max(2, static_cast<int>(std::lround(extent / resolution)));
}

bool inside_channel(const ChannelShape& shape, const ChannelPath& path, double y, double z) {
    const double depth = (z - path.z_flat) * path.z_direction;
    const double dy = y - path.y_center;
    if (const auto* rect = std::get_if<Rectangular>(&shape)) {
        return depth >= 0 && depth <= rect->height && std::abs(dy) <= rect->width / 2;
    }
    const double r = std::get<Semicircular>(shape).radius;
    return depth >= 0 && dy * dy + depth * depth <= r * r;
}

// Adds a face to every solid neighbour of the void cells of each stream.
void collect_wetted_faces(Grid& g) {
    const Eigen::Vector3i n = g.cells;
    const Eigen::Vector3d h = g.spacing;
    const std::array<double, 3> face_area{h.y() * h.z(), h.x() * h.z(), h.x() * h.y()};
    for (int c = 0; c < static_cast<int>(g.cell_count()); ++c) {
        if (g.kind[c] != CellKind::channel_void) continue;
        const int s = g.stream_of[c];
        const Eigen::Vector3i p = g.ijk(c);
        for (int axis = 0; axis < 3; ++axis) {
            for (int dir : {-1, 1}) {
                Eigen::Vector3i q = p;
                q[axis] += dir;
                if (q[axis] < 0 || q[axis] >= n[axis]) continue;
                const int nb = g.index(q.x(), q.y(), q.z());
                if (g.kind[nb] != CellKind::solid) continue;
                g.convective.push_back({nb, axis, face_area[axis], s, p.x() - g.streams[s].first_station_x});
            }
        }
    }
    std::vector<double> voxel_area(g.streams.size(), 0.0);
    for (const auto& f : g.convective) voxel_area[f.stream] += f.area;
    for (std::size_t s = 0; s < g.streams.size(); ++s) {
        if (voxel_area[s] > 0) g.streams[s].area_correction = g.streams[s].wetted_area / voxel_area[s];
    }
}

struct Box {
    double x0, y0, x1, y1;
};

double overlap_area(const Box& a, const Box& b) {
    const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    return (w > 0 && h > 0) ? w * h : 0.0;
}

} // namespace

Grid build_grid(const Assembly& assembly, double resolution) {
    require_valid(assembly);
    if (!(resolution > 0)) throw InvalidInputError("grid resolution must be positive");

    const auto& plate = assembly.plate;
    const auto& layout = assembly.layout;
    Grid g;
    g.cells = {cells_along(plate.length, resolution), cells_along(plate.width, resolution),
               cells_along(plate.thickness, resolution)};
    g.spacing = {plate.length / g.cells.x(), plate.width / g.cells.y(), plate.thickness / g.cells.z()};
    const auto n = g.cells;
    const auto h = g.spacing;
    g.kind.assign(static_cast<std::size_t>(n.prod()), CellKind::solid);
    g.stream_of.assign(g.kind.size(), -1);

    const double area = cross_section_area(layout.shape);
    const double dh = hydraulic_diameter(layout.shape);
    const double perimeter = wetted_perimeter(layout.shape);
    const double depth = channel_depth(layout.shape);
    const double half_span = channel_span(layout.shape) / 2;

    const auto paths = channel_paths(assembly);
    for (std::size_t s = 0; s < paths.size(); ++s) {
        const auto& path = paths[s];
        Stream stream;
        stream.flow_area = area;
        stream.hydraulic_diameter = dh;
        stream.wetted_area = perimeter * layout.channel_length;

        int i_first = n.x();
        int i_last = -1;
        for (int i = 0; i < n.x(); ++i) {
            const double xc = (i + 0.5) * h.x();
            if (xc >= path.x_begin && xc <= path.x_end) {
                i_first = std::min(i_first, i);
                i_last = std::max(i_last, i);
            }
        }
        if (i_last < i_first) throw GridError("resolution too coarse to resolve channel length");
        stream.first_station_x = i_first;
        stream.stations = i_last - i_first + 1;

        const double z_lo = std::min(path.z_flat, path.z_flat + path.z_direction * depth);
        const double z_hi = std::max(path.z_flat, path.z_flat + path.z_direction * depth);
        const int j0 = std::max(0, static_cast<int>(std::floor((path.y_center - half_span) / h.y())));
        const int j1 = std::min(n.y() - 1, static_cast<int>(std::floor((path.y_center + half_span) / h.y())));
        const int k0 = std::max(0, static_cast<int>(std::floor(z_lo / h.z())));
        const int k1 = std::min(n.z() - 1, static_cast<int>(std::floor(z_hi / h.z())));

        int void_columns = 0;
        for (int k = k0; k <= k1; ++k) {
            for (int j = j0; j <= j1; ++j) {
                int hits = 0;
                for (int a = 0; a < kSubsamples; ++a) {
                    for (int b = 0; b < kSubsamples; ++b) {
                        const double y = (j + (a + 0.5) / kSubsamples) * h.y();
                        const double z = (k + (b + 0.5) / kSubsamples) * h.z();
                        hits += inside_channel(layout.shape, path, y, z) ? 1 : 0;
                    }
                }
                if (2 * hits <= kSubsamples * kSubsamples) continue;
                if (k == 0 || k == n.z() - 1 || j == 0 || j == n.y() - 1) {
                    throw GridError("resolution too coarse: no solid cell left between a channel and the plate surface");
                }
                ++void_columns;
                for (int i = i_first; i <= i_last; ++i) {
                    const int c = g.index(i, j, k);
                    if (g.kind[c] == CellKind::channel_void) {
                        throw GridError("resolution too coarse: neighbouring channels merge");
                    }
                    g.kind[c] = CellKind::channel_void;
                    g.stream_of[c] = static_cast<int>(s);
                }
            }
        }
        if (void_columns == 0) throw GridError("resolution too coarse to resolve the channel cross-section");
        g.streams.push_back(stream);
    }

    collect_wetted_faces(g);

    for (const auto& m : assembly.modules) {
        const int k = m.face == Face::top ? n.z() - 1 : 0;
        for (const auto& d : m.dies) {
            if (d.power == 0.0) continue;
            const Eigen::Vector2d lo = m.origin + d.center - d.footprint / 2;
            const Eigen::Vector2d hi = m.origin + d.center + d.footprint / 2;
            const Box die{lo.x(), lo.y(), hi.x(), hi.y()};
            const double flux = d.power / (d.footprint.x() * d.footprint.y());
            const int i0 = std::max(0, static_cast<int>(std::floor(lo.x() / h.x())));
            const int i1 = std::min(n.x() - 1, static_cast<int>(std::floor(hi.x() / h.x())));
            const int jj0 = std::max(0, static_cast<int>(std::floor(lo.y() / h.y())));
            const int jj1 = std::min(n.y() - 1, static_cast<int>(std::floor(hi.y() / h.y())));
            for (int j = jj0; j <= jj1; ++j) {
                for (int i = i0; i <= i1; ++i) {
                    const Box cell{i * h.x(), j * h.y(), (i + 1) * h.x(), (j + 1) * h.y()};
                    const double a = overlap_area(die, cell);
                    if (a > 0) g.sources.push_back({g.index(i, j, k), flux * a});
                }
            }
        }
    }
    return g;
}

double SlabCase::analytic_rise(double conductivity) const {
    return heat_flux * (thickness / conductivity + 1.0 / h);
}

Grid build_slab_grid(const SlabCase& slab, double resolution) {
    if (!(resolution > 0)) throw InvalidInputError("grid resolution must be positive");
    Grid g;
    g.cells = {cells_along(slab.length, resolution), cells_along(slab.width, resolution),
               cells_along(slab.thickness, resolution)};
    g.spacing = {slab.length / g.cells.x(), slab.width / g.cells.y(), slab.thickness / g.cells.z()};
    g.kind.assign(static_cast<std::size_t>(g.cells.prod()), CellKind::solid);
    g.stream_of.assign(g.kind.size(), -1);

    Stream s;
    // Large flow area keeps the coolant practically isothermal.
    s.flow_area = 1.0;
    s.hydraulic_diameter = 1.0;
    s.wetted_area = slab.length * slab.width;
    s.first_station_x = 0;
    s.stations = g.cells.x();
    s.fixed_h = slab.h;
    g.streams.push_back(s);

    const double face = g.spacing.x() * g.spacing.y();
    for (int j = 0; j < g.cells.y(); ++j) {
        for (int i = 0; i < g.cells.x(); ++i) {
            g.convective.push_back({g.index(i, j, 0), 2, face, 0, i});
            g.sources.push_back({g.index(i, j, g.cells.z() - 1), slab.heat_flux * face});
        }
    }
    return g;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct StreamState {
    double capacity = 0.0; // mdot cp, W/K
    double h = 0.0;        // effective on voxel faces
};

} // namespace

FvSolution solve(const Grid& grid, const CoolantProps& coolant, const FlowCondition& flow,
                 const SolidMaterial& material, const FvSettings& settings) {
    check(coolant);
    check(material);
    if (!(flow.inlet_velocity > 0)) throw ZeroFlowError("FV solve needs a positive inlet velocity");
    if (grid.cells.minCoeff() < 2 || grid.kind.size() != static_cast<std::size_t>(grid.cells.prod())) {
        throw GridError("invalid grid dimensions");
    }

    const double t_in = flow.inlet_temperature;
    const double k = material.thermal_conductivity;
    const auto n = grid.cells;
    const auto h = grid.spacing;

    FvSolution sol;
    sol.cells = n;
    sol.spacing = h;
    sol.kind = grid.kind;
    sol.total_power = grid.total_power();
    sol.coolant_profile.resize(grid.streams.size());
    for (std::size_t s = 0; s < grid.streams.size(); ++s) {
        sol.coolant_profile[s].assign(static_cast<std::size_t>(grid.streams[s].stations) + 1, t_in);
    }

    if (sol.total_power == 0.0) {
        sol.temperature.assign(grid.cell_count(), t_in);
        sol.t_max = sol.t_min = t_in;
        sol.coolant_outlet_mixed = t_in;
        return sol;
    }
    if (grid.convective.empty()) throw GridError("grid has heat input but no convective faces");

    // Unknown numbering over solid cells.
    std::vector<int> unknown(grid.cell_count(), -1);
    int m = 0;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        if (grid.kind[c] == CellKind::solid) unknown[c] = m++;
    }

    std::vector<StreamState> streams(grid.streams.size());
    for (std::size_t s = 0; s < grid.streams.size(); ++s) {
        const auto& st = grid.streams[s];
        const double h_base = st.fixed_h ? *st.fixed_h
                                         : heat_transfer_coefficient(coolant, st.hydraulic_diameter,
                                                                     flow.inlet_velocity);
        streams[s].h = h_base * st.area_correction;
        streams[s].capacity = coolant.density * flow.inlet_velocity * st.flow_area * coolant.specific_heat;
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(m) * 7);
    const std::array<double, 3> conductance{k * h.y() * h.z() / h.x(), k * h.x() * h.z() / h.y(),
                                            k * h.x() * h.y() / h.z()};
    for (int kk = 0; kk < n.z(); ++kk) {
        for (int j = 0; j < n.y(); ++j) {
            for (int i = 0; i < n.x(); ++i) {
                const int c = grid.index(i, j, kk);
                const int p = unknown[c];
                if (p < 0) continue;
                const std::array<int, 3> next{i + 1 < n.x() ? grid.index(i + 1, j, kk) : -1,
                                              j + 1 < n.y() ? grid.index(i, j + 1, kk) : -1,
                                              kk + 1 < n.z() ? grid.index(i, j, kk + 1) : -1};
                for (int axis = 0; axis < 3; ++axis) {
                    if (next[axis] < 0) continue;
                    const int q = unknown[next[axis]];
                    if (q < 0) continue;
                    const double gcond = conductance[axis];
                    triplets.emplace_back(p, p, gcond);
                    triplets.emplace_back(q, q, gcond);
                    triplets.emplace_back(p, q, -gcond);
                    triplets.emplace_back(q, p, -gcond);
                }
            }
        }
    }

    // Robin faces: half a cell of conduction in series with the film.
    std::vector<double> face_g(grid.convective.size());
    for (std::size_t f = 0; f < grid.convective.size(); ++f) {
        const auto& face = grid.convective[f];
        const int p = unknown[face.cell];
        if (p < 0) throw GridError("convective face attached to a void cell");
        const double half = h[face.axis] / (2 * k);
        face_g[f] = face.area / (half + 1.0 / streams[face.stream].h);
        triplets.emplace_back(p, p, face_g[f]);
    }

    SpMat a(m, m);
    a.setFromTriplets(triplets.begin(), triplets.end());
    triplets.clear();
    triplets.shrink_to_fit();

    Eigen::VectorXd source = Eigen::VectorXd::Zero(m);
    for (const auto& s : grid.sources) {
        const int p = unknown[s.cell];
        if (p < 0) throw GridError("heat source attached to a void cell");
        source[p] += s.power;
    }

    // Faces bucketed by (stream, station) for the coolant march.
    std::vector<std::vector<std::vector<int>>> buckets(grid.streams.size());
    for (std::size_t s = 0; s < grid.streams.size(); ++s) {
        buckets[s].resize(static_cast<std::size_t>(grid.streams[s].stations));
    }
    for (std::size_t f = 0; f < grid.convective.size(); ++f) {
        const auto& face = grid.convective[f];
        if (face.station < 0 || face.station >= grid.streams[face.stream].stations) {
            throw GridError("convective face station out of range");
        }
        buckets[face.stream][face.station].push_back(static_cast<int>(f));
    }

    // Everything below works with the rise over the inlet temperature.
    std::vector<std::vector<double>> fluid(grid.streams.size());
    for (std::size_t s = 0; s < grid.streams.size(); ++s) {
        fluid[s].assign(static_cast<std::size_t>(grid.streams[s].stations) + 1, 0.0);
    }

    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(settings.tol);
    cg.setMaxIterations(settings.max_iters);
    cg.compute(a);
    if (cg.info() != Eigen::Success) throw GridError("failed to set up the linear solver");

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd rhs(m);
    auto wall_heat = [&](std::size_t s, std::size_t st, double fluid_rise) {
        double q = 0.0;
        for (int f : buckets[s][st]) q += face_g[f] * (theta[unknown[grid.convective[f].cell]] - fluid_rise);
        return q;
    };

    std::vector<std::vector<double>> used; // profile behind the last right-hand side
    bool converged = false;
    for (int outer = 1; outer <= settings.max_outer; ++outer) {
        rhs = source;
        for (std::size_t f = 0; f < grid.convective.size(); ++f) {
            const auto& face = grid.convective[f];
            rhs[unknown[face.cell]] += face_g[f] * fluid[face.stream][face.station];
        }
        theta = cg.solveWithGuess(rhs, theta);
        sol.residual = cg.error();
        sol.residual_history.push_back(sol.residual);
        sol.linear_iterations += static_cast<int>(cg.iterations());
        sol.iterations = outer;
        if (cg.info() != Eigen::Success) {
            throw ConvergenceError("linear solve did not reach tolerance after " +
                                       std::to_string(cg.iterations()) + " iterations (residual " +
                                       format_double(cg.error()) + ")",
                                   sol.residual_history);
        }
        used = fluid;

        // March each stream against the wall temperatures just solved for,
        // using the updated upstream coolant temperature at every station.
        double change = 0.0;
        for (std::size_t s = 0; s < grid.streams.size(); ++s) {
            auto& prof = fluid[s];
            for (std::size_t st = 0; st < buckets[s].size(); ++st) {
                const double next = prof[st] + wall_heat(s, st, prof[st]) / streams[s].capacity;
                change = std::max(change, std::abs(next - prof[st + 1]));
                prof[st + 1] = next;
            }
        }
        if (change < settings.outer_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("coolant coupling did not settle within " +
                                   std::to_string(settings.max_outer) + " sweeps",
                               sol.residual_history);
    }

    // Reported profiles integrate exactly the wall heat of the last solid
    // solve, so wall heat and caloric heat agree to round-off.
    double mixed = 0.0;
    double capacity_total = 0.0;
    for (std::size_t s = 0; s < grid.streams.size(); ++s) {
        auto& profile = sol.coolant_profile[s];
        double rise = 0.0;
        for (std::size_t st = 0; st < buckets[s].size(); ++st) {
            const double q = wall_heat(s, st, used[s][st]);
            sol.convective_heat += q;
            rise += q / streams[s].capacity;
            profile[st + 1] = t_in + rise;
        }
        sol.caloric_heat += streams[s].capacity * rise;
        mixed += streams[s].capacity * profile.back();
        capacity_total += streams[s].capacity;
    }
    sol.coolant_outlet_mixed = capacity_total > 0 ? mixed / capacity_total : t_in;
    sol.energy_imbalance = std::max(std::abs(sol.total_power - sol.convective_heat),
                                    std::abs(sol.convective_heat - sol.caloric_heat));

    sol.temperature.assign(grid.cell_count(), t_in);
    sol.t_max = -std::numeric_limits<double>::infinity();
    sol.t_min = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        if (unknown[c] >= 0) {
            const double t = t_in + theta[unknown[c]];
            sol.temperature[c] = t;
            sol.t_max = std::max(sol.t_max, t);
            sol.t_min = std::min(sol.t_min, t);
        } else {
            const int s = grid.stream_of[c];
            const auto& st = grid.streams[s];
            const int station = std::clamp(grid.ijk(static_cast<int>(c)).x() - st.first_station_x, 0,
                                           st.stations - 1);
            const auto& profile = sol.coolant_profile[s];
            sol.temperature[c] = 0.5 * (profile[station] + profile[station + 1]);
        }
    }
    return sol;
}

MeshStudy mesh_study(const GridBuilder& builder, const CoolantProps& coolant,
                     const FlowCondition& flow, const SolidMaterial& material,
                     const std::vector<double>& resolutions, const FvSettings& settings) {
    if (resolutions.size() < 3) throw InvalidInputError("mesh study needs at least three resolutions");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        if (!(resolutions[i] > 0)) throw InvalidInputError("mesh study resolutions must be positive");
        if (i > 0 && !(resolutions[i] < resolutions[i - 1])) {
            throw InvalidInputError("mesh study resolutions must be strictly descending");
        }
    }
    MeshStudy study;
    for (double res : resolutions) {
        const Grid grid = builder(res);
        const FvSolution sol = solve(grid, coolant, flow, material, settings);
        MeshStudyRow row{res, grid.cell_count(), sol.t_max, std::nullopt};
        if (!study.rows.empty()) row.delta = std::abs(sol.t_max - study.rows.back().t_max);
        study.rows.push_back(row);
    }
    study.converged = *study.rows.back().delta < kMeshConvergenceDelta;
    return study;
}

MeshStudy mesh_study(const Assembly& assembly, const CoolantProps& coolant,
                     const FlowCondition& flow, const std::vector<double>& resolutions,
                     const FvSettings& settings) {
    return mesh_study([&](double res) { return build_grid(assembly, res); }, coolant, flow,
                      assembly.plate.material, resolutions, settings);
}

void write_field(std::ostream& os, const FvSolution& solution) {
    const auto n = solution.cells;
    os << "# vtk DataFile Version 3.0\n"
       << "coldplate temperature (degC), cell centred\n"
       << "ASCII\n"
       << "DATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << n.x() + 1 << ' ' << n.y() + 1 << ' ' << n.z() + 1 << '\n'
       << "ORIGIN 0 0 0\n"
       << "SPACING " << format_double(solution.spacing.x()) << ' ' << format_double(solution.spacing.y())
       << ' ' << format_double(solution.spacing.z()) << '\n'
       << "CELL_DATA " << n.prod() << '\n'
       << "SCALARS temperature_C double 1\n"
       << "LOOKUP_TABLE default\n";
    for (double t : solution.temperature) os << format_double(t) << '\n';
    os << "SCALARS solid int 1\n"
       << "LOOKUP_TABLE default\n";
    for (auto kind : solution.kind) os << (kind == CellKind::solid ? 1 : 0) << '\n';
}

} // namespace coldplate
