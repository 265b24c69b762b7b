#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "coldplate/geometry.hpp"
#include "coldplate/hydraulics.hpp"
#include "coldplate/properties.hpp"

namespace coldplate {

enum class CellKind : std::uint8_t { solid, channel_void };

// Solid cell face wetted by coolant stream `stream` at streamwise `station`.
struct ConvectiveFace {
    int cell = 0;
    int axis = 0; // 0 = x, 1 = y, 2 = z
    double area = 0.0;
    int stream = 0;
    int station = 0;
};

// Heat injected through an exterior face of a solid cell.
struct FluxSource {
    int cell = 0;
    double power = 0.0; // W
};

// One coolant channel, marched station by station along x.
struct Stream {
    double flow_area = 0.0;          // m^2, analytic cross-section
    double hydraulic_diameter = 0.0; // m
    double wetted_area = 0.0;        // m^2, analytic P L
    int first_station_x = 0;         // x index of station 0
    int stations = 0;
    // h on the rasterised wall is scaled by this so h A_voxel = h_corr A_analytic.
    double area_correction = 1.0;
    // Overrides the correlation; used by verification fixtures.
    std::optional<double> fixed_h;
};

// Uniform structured grid over the plate box.
struct Grid {
    Eigen::Vector3i cells = Eigen::Vector3i::Zero();
    Eigen::Vector3d spacing = Eigen::Vector3d::Zero();
    std::vector<CellKind> kind;
    std::vector<int> stream_of; // for void cells, -1 on solid
    std::vector<ConvectiveFace> convective;
    std::vector<FluxSource> sources;
    std::vector<Stream> streams;

    int index(int i, int j, int k) const { return i + cells.x() * (j + cells.y() * k); }
    Eigen::Vector3i ijk(int cell) const;
    std::size_t cell_count() const { return kind.size(); }
    std::size_t solid_count() const;
    std::size_t void_count() const { return cell_count() - solid_count(); }
    double cell_volume() const { return spacing.prod(); }
    double total_power() const;
};

struct FvSettings {
    double tol = 1e-8;      // relative residual of the linear solve
    int max_iters = 20000;  // linear iterations per solve
    double outer_tol = 1e-3; // K, coolant profile change between coupling sweeps
    int max_outer = 200;
};

struct FvSolution {
    Eigen::Vector3i cells = Eigen::Vector3i::Zero();
    Eigen::Vector3d spacing = Eigen::Vector3d::Zero();
    // Cell-centred temperature, degC. Void cells hold the local coolant temperature.
    std::vector<double> temperature;
    std::vector<CellKind> kind;
    double t_max = 0.0;
    double t_min = 0.0; // over solid cells
    // Per stream: stations + 1 values, inlet first.
    std::vector<std::vector<double>> coolant_profile;
    double residual = 0.0;           // final relative linear residual
    std::vector<double> residual_history; // one per coupling sweep
    int iterations = 0;              // coupling sweeps
    int linear_iterations = 0;       // summed over sweeps
    double total_power = 0.0;    // W
    double convective_heat = 0.0; // W, summed over wetted faces
    double caloric_heat = 0.0;    // W, sum of mdot cp (T_out - T_in)
    double energy_imbalance = 0.0; // W
    double coolant_outlet_mixed = 0.0; // degC, flow-weighted
};

// Voxelises the plate. A cell becomes channel void when more than half of its
// cross-section lies inside the channel. Throws GridError when no solid layer
// remains between a channel and the plate surface.
Grid build_grid(const Assembly& assembly, double resolution);

// Steady conduction in the solid, coupled to a bulk coolant march per stream.
FvSolution solve(const Grid& grid, const CoolantProps& coolant, const FlowCondition& flow,
                 const SolidMaterial& material, const FvSettings& settings = {});

// Plain slab: uniform flux on the top face, convective bottom face, adiabatic
// sides. Temperature rise of the top surface over the coolant is
// q (t/k + 1/h).
struct SlabCase {
    double length = 0.1;
    double width = 0.05;
    double thickness = 0.01;
    double heat_flux = 1.0e4; // W/m^2
    double h = 1000.0;        // W/(m^2 K)

    double analytic_rise(double conductivity) const;
};

Grid build_slab_grid(const SlabCase& slab, double resolution);

struct MeshStudyRow {
    double resolution = 0.0;
    std::size_t cells = 0;
    double t_max = 0.0;
    std::optional<double> delta; // |t_max - previous t_max|, K
};

struct MeshStudy {
    std::vector<MeshStudyRow> rows;
    bool converged = false; // last delta below threshold
};

inline constexpr double kMeshConvergenceDelta = 0.5; // K

using GridBuilder = std::function<Grid(double resolution)>;

MeshStudy mesh_study(const GridBuilder& builder, const CoolantProps& coolant,
                     const FlowCondition& flow, const SolidMaterial& material,
                     const std::vector<double>& resolutions, const FvSettings& settings = {});

MeshStudy mesh_study(const Assembly& assembly, const CoolantProps& coolant,
                     const FlowCondition& flow, const std::vector<double>& resolutions,
                     const FvSettings& settings = {});

// Legacy VTK structured points, cell data.
void write_field(std::ostream& os, const FvSolution& solution);

} // namespace coldplate
