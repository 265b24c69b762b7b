#include "coldplate/presets.hpp"

namespace coldplate {

ModulePlacement make_module(std::string id, Face face, Eigen::Vector2d origin, double power) {
    ModulePlacement m;
    m.id = std::move(id);
    m.face = face;
    m.origin = origin;
    m.footprint = {kModuleLength, kModuleWidth};
    const double die_power = power / kDiesPerModule;
    for (int ix = 0; ix < 2; ++ix) {
        for (int iy = 0; iy < 3; ++iy) {
            DieSource d;
            d.center = {kModuleLength * (2 * ix + 1) / 4.0, kModuleWidth * (2 * iy + 1) / 6.0};
            d.footprint = {kDieSize, kDieSize};
            d.power = die_power;
            m.dies.push_back(d);
        }
    }
    return m;
}

namespace {

// Three modules per face, centred at 1/6, 1/2 and 5/6 of the plate length.
std::vector<ModulePlacement> primary_modules(double length, double width) {
    std::vector<ModulePlacement> modules;
    const double y0 = (width - kModuleWidth) / 2;
    for (int i = 0; i < 6; ++i) {
        const Face face = i < 3 ? Face::top : Face::bottom;
        const int slot = i % 3;
        const double xc = length * (2 * slot + 1) / 6.0;
        modules.push_back(make_module("P" + std::to_string(i + 1), face,
                                      {xc - kModuleLength / 2, y0}, kPrimaryPairLosses[i]));
    }
    return modules;
}

} // namespace

Assembly primary_side() {
    Assembly a;
    a.plate = {0.480, 0.190, 0.0076, get_material("copper")};
    a.layout.rows = 2;
    a.layout.channels_per_row = 6;
    a.layout.channel_length = a.plate.length;
    a.layout.shape = Semicircular{0.0023};
    a.layout.cover_thickness = 0.001;
    a.modules = primary_modules(a.plate.length, a.plate.width);
    return a;
}

Assembly primary_side_initial() {
    Assembly a = primary_side();
    a.plate.thickness = 0.018;
    a.layout.channels_per_row = 3;
    a.layout.shape = Semicircular{0.0046};
    return a;
}

Assembly secondary_side() {
    Assembly a;
    a.plate = {0.330, 0.205, 0.0076, get_material("copper")};
    a.layout.rows = 2;
    a.layout.channels_per_row = 6;
    a.layout.channel_length = a.plate.length;
    a.layout.shape = Semicircular{0.0023};
    a.layout.cover_thickness = 0.001;
    const double y0 = (a.plate.width - kModuleWidth) / 2;
    for (int i = 0; i < 2; ++i) {
        const double xc = a.plate.length * (2 * i + 1) / 4.0;
        a.modules.push_back(make_module("S" + std::to_string(i + 1), Face::top,
                                        {xc - kModuleLength / 2, y0}, kSecondaryPairLosses[i]));
    }
    return a;
}

ChannelLayout rectangular_reference_layout(double channel_length) {
    ChannelLayout l;
    l.rows = 2;
    l.channels_per_row = 3;
    l.channel_length = channel_length;
    l.shape = Rectangular{0.010, 0.002};
    l.cover_thickness = 0.001;
    return l;
}

std::vector<std::string> preset_names() {
    return {"primary_side", "primary_side_initial", "secondary_side"};
}

Assembly preset(std::string_view name) {
    if (name == "primary_side") return primary_side();
    if (name == "primary_side_initial") return primary_side_initial();
    if (name == "secondary_side") return secondary_side();
    throw InvalidInputError("unknown preset '" + std::string(name) + "'");
}

} // namespace coldplate
