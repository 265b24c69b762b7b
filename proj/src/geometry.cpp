#include "coldplate/geometry.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace coldplate {

namespace {

std::string fmt_mm(double m) {
    std::ostringstream os;
    os << m * 1e3 << " mm";
    return os.str();
}

struct Rect {
    double x0, y0, x1, y1;
};

bool overlaps(const Rect& a, const Rect& b) {
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

bool contains(const Rect& outer, const Rect& inner, double eps = 1e-12) {
    return inner.x0 >= outer.x0 - eps && inner.y0 >= outer.y0 - eps &&
           inner.x1 <= outer.x1 + eps && inner.y1 <= outer.y1 + eps;
}

Rect module_rect(const ModulePlacement& m) {
    return {m.origin.x(), m.origin.y(), m.origin.x() + m.footprint.x(), m.origin.y() + m.footprint.y()};
}

Rect die_rect_local(const DieSource& d) {
    return {d.center.x() - d.footprint.x() / 2, d.center.y() - d.footprint.y() / 2,
            d.center.x() + d.footprint.x() / 2, d.center.y() + d.footprint.y() / 2};
}

} // namespace

std::string shape_name(const ChannelShape& shape) {
    return std::holds_alternative<Rectangular>(shape) ? "rectangular" : "semicircular";
}

std::string to_string(Face face) { return face == Face::top ? "top" : "bottom"; }

double ModulePlacement::power() const {
    return std::accumulate(dies.begin(), dies.end(), 0.0,
                           [](double acc, const DieSource& d) { return acc + d.power; });
}

double Assembly::total_power() const {
    return std::accumulate(modules.begin(), modules.end(), 0.0,
                           [](double acc, const ModulePlacement& m) { return acc + m.power(); });
}

double lateral_pitch(const ChannelLayout& layout, double plate_width) {
    if (layout.lateral_pitch) return *layout.lateral_pitch;
    return plate_width / layout.channels_per_row;
}

std::vector<ChannelPath> channel_paths(const Assembly& assembly) {
    const auto& plate = assembly.plate;
    const auto& layout = assembly.layout;
    const double pitch = lateral_pitch(layout, plate.width);
    const double x_begin = (plate.length - layout.channel_length) / 2;
    const double x_end = x_begin + layout.channel_length;

    std::vector<ChannelPath> paths;
    paths.reserve(static_cast<std::size_t>(layout.channel_count()));
    for (int row = 0; row < layout.rows; ++row) {
        const bool under_top = row == 0;
        for (int i = 0; i < layout.channels_per_row; ++i) {
            ChannelPath p;
            p.row = row;
            p.index = i;
            p.y_center = plate.width / 2 + (i - (layout.channels_per_row - 1) / 2.0) * pitch;
            p.z_flat = under_top ? plate.thickness - layout.cover_thickness : layout.cover_thickness;
            p.z_direction = under_top ? -1.0 : 1.0;
            p.x_begin = x_begin;
            p.x_end = x_end;
            paths.push_back(p);
        }
    }
    return paths;
}

double total_wetted_area(const ChannelLayout& layout) {
    if (layout.rows < 1 || layout.channels_per_row < 1) {
        throw InvalidInputError("channel layout needs at least one row and one channel per row");
    }
    if (!(layout.channel_length > 0.0)) throw InvalidInputError("channel length must be positive");
    return wetted_perimeter(layout.shape) * layout.channel_length * layout.channel_count();
}

double equal_area_radius(const ChannelLayout& reference, int new_channels_per_row) {
    const auto* rect = std::get_if<Rectangular>(&reference.shape);
    if (rect == nullptr) throw InvalidInputError("equal-area reference must use rectangular channels");
    if (reference.channels_per_row < 1 || new_channels_per_row < 1) {
        throw InvalidInputError("channel counts must be at least 1");
    }
    const double perimeter = wetted_perimeter(reference.shape);
    return perimeter * reference.channels_per_row /
           ((std::numbers::pi + 2.0) * new_channels_per_row);
}

double channel_volume(const ChannelLayout& layout) {
    return cross_section_area(layout.shape) * layout.channel_length * layout.channel_count();
}

double plate_mass(const Assembly& assembly) {
    const auto& p = assembly.plate;
    const double box = p.length * p.width * p.thickness;
    return p.material.density * (box - channel_volume(assembly.layout));
}

std::vector<std::string> validate(const Assembly& assembly) {
    std::vector<std::string> out;
    const auto& plate = assembly.plate;
    const auto& layout = assembly.layout;

    if (!(plate.length > 0 && plate.width > 0 && plate.thickness > 0)) {
        out.push_back("plate dimensions must be strictly positive");
    }
    if (!(plate.material.thermal_conductivity > 0 && plate.material.density > 0 &&
          plate.material.specific_heat > 0)) {
        out.push_back("plate material '" + plate.material.name + "' has nonpositive properties");
    }

    bool layout_ok = true;
    if (layout.rows < 1 || layout.rows > 2) {
        out.push_back("channel rows must be 1 or 2 (got " + std::to_string(layout.rows) + ")");
        layout_ok = false;
    }
    if (layout.channels_per_row < 1) {
        out.push_back("channels_per_row must be at least 1");
        layout_ok = false;
    }
    if (!(layout.channel_length > 0)) {
        out.push_back("channel length must be positive");
        layout_ok = false;
    } else if (layout.channel_length > plate.length * (1 + 1e-12)) {
        out.push_back("channel length " + fmt_mm(layout.channel_length) + " exceeds plate length " +
                      fmt_mm(plate.length));
    }
    if (!(layout.cover_thickness > 0)) {
        out.push_back("cover thickness must be positive");
        layout_ok = false;
    }
    try {
        check(layout.shape);
    } catch (const InvalidInputError& e) {
        out.emplace_back(e.what());
        layout_ok = false;
    }
    if (layout.lateral_pitch && !(*layout.lateral_pitch > 0)) {
        out.push_back("lateral pitch must be positive");
        layout_ok = false;
    }

    if (layout_ok && plate.width > 0 && plate.thickness > 0) {
        const double depth = channel_depth(layout.shape);
        const double needed = layout.rows * depth + 2 * layout.cover_thickness;
        if (needed > plate.thickness * (1 + 1e-12)) {
            out.push_back("channels do not fit the thickness: " + std::to_string(layout.rows) +
                          " x depth " + fmt_mm(depth) + " + 2 x cover " +
                          fmt_mm(layout.cover_thickness) + " > " + fmt_mm(plate.thickness));
        }
        const double span = channel_span(layout.shape);
        const double pitch = lateral_pitch(layout, plate.width);
        if (layout.channels_per_row > 1 && pitch < span) {
            out.push_back("lateral pitch " + fmt_mm(pitch) + " is smaller than channel span " +
                          fmt_mm(span) + " (channels overlap)");
        }
        const double outer = (layout.channels_per_row - 1) * pitch + span;
        if (outer > plate.width * (1 + 1e-12)) {
            out.push_back("channel row spans " + fmt_mm(outer) + ", wider than the plate " +
                          fmt_mm(plate.width));
        }
    }

    const Rect plate_rect{0, 0, plate.length, plate.width};
    for (std::size_t i = 0; i < assembly.modules.size(); ++i) {
        const auto& m = assembly.modules[i];
        const std::string tag = "module '" + m.id + "'";
        if (!(m.footprint.x() > 0 && m.footprint.y() > 0)) {
            out.push_back(tag + ": footprint must be positive");
            continue;
        }
        const Rect mr = module_rect(m);
        if (!contains(plate_rect, mr)) out.push_back(tag + ": footprint lies outside the plate");
        for (std::size_t j = 0; j < i; ++j) {
            const auto& other = assembly.modules[j];
            if (other.face == m.face && overlaps(mr, module_rect(other))) {
                out.push_back(tag + " overlaps module '" + other.id + "' on the " + to_string(m.face) +
                              " face");
            }
        }
        const Rect local{0, 0, m.footprint.x(), m.footprint.y()};
        for (std::size_t d = 0; d < m.dies.size(); ++d) {
            const auto& die = m.dies[d];
            const std::string dtag = tag + " die " + std::to_string(d);
            if (die.power < 0) out.push_back(dtag + ": negative power");
            if (!(die.footprint.x() > 0 && die.footprint.y() > 0)) {
                out.push_back(dtag + ": footprint must be positive");
                continue;
            }
            const Rect dr = die_rect_local(die);
            if (!contains(local, dr)) out.push_back(dtag + ": footprint lies outside its module");
            for (std::size_t e = 0; e < d; ++e) {
                if (m.dies[e].footprint.minCoeff() > 0 && overlaps(dr, die_rect_local(m.dies[e]))) {
                    out.push_back(dtag + " overlaps die " + std::to_string(e));
                }
            }
        }
    }
    return out;
}

void require_valid(const Assembly& assembly) {
    auto violations = validate(assembly);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

} // namespace coldplate
