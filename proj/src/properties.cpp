#include "coldplate/properties.hpp"

#include "coldplate/errors.hpp"

namespace coldplate {

namespace {

void require_positive(double value, const std::string& owner, const char* field) {
    if (!(value > 0.0)) {
        throw InvalidInputError(owner + ": " + field + " must be strictly positive");
    }
}

} // namespace

void check(const SolidMaterial& m) {
    const std::string owner = "material '" + m.name + "'";
    require_positive(m.thermal_conductivity, owner, "thermal_conductivity");
    require_positive(m.density, owner, "density");
    require_positive(m.specific_heat, owner, "specific_heat");
}

void check(const CoolantProps& c) {
    const std::string owner = "coolant '" + c.name + "'";
    require_positive(c.density, owner, "density");
    require_positive(c.dynamic_viscosity, owner, "dynamic_viscosity");
    require_positive(c.specific_heat, owner, "specific_heat");
    require_positive(c.thermal_conductivity, owner, "thermal_conductivity");
    require_positive(c.reference_temperature, owner, "reference_temperature");
}

MaterialLibrary::MaterialLibrary() {
    // Defaults as shipped in common CFD solver property tables.
    add({"copper", 387.6, 8978.0, 381.0});
    add({"aluminum", 202.4, 2719.0, 871.0});
    add({"stainless-steel", 16.27, 8030.0, 502.48});
}

const SolidMaterial& MaterialLibrary::get(std::string_view name) const {
    auto it = records_.find(name);
    if (it == records_.end()) throw UnknownMaterialError(std::string(name));
    return it->second;
}

bool MaterialLibrary::contains(std::string_view name) const {
    return records_.find(name) != records_.end();
}

std::vector<std::string> MaterialLibrary::names() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& [name, _] : records_) out.push_back(name);
    return out;
}

void MaterialLibrary::add(SolidMaterial m) {
    check(m);
    auto name = m.name;
    records_.insert_or_assign(std::move(name), std::move(m));
}

void MaterialLibrary::merge(const nlohmann::json& user) {
    if (!user.is_object()) {
        throw InvalidInputError("material overrides must be a JSON object keyed by material name");
    }
    for (const auto& [name, entry] : user.items()) {
        if (!entry.is_object()) {
            throw InvalidInputError("material '" + name + "' must be a JSON object");
        }
        SolidMaterial m{name, 0.0, 0.0, 0.0};
        if (auto it = records_.find(name); it != records_.end()) m = it->second;
        for (const auto& [key, value] : entry.items()) {
            if (!value.is_number()) {
                throw InvalidInputError("material '" + name + "': '" + key + "' must be a number");
            }
            if (key == "conductivity_wpmk") {
                m.thermal_conductivity = value.get<double>();
            } else if (key == "density_kgpm3") {
                m.density = value.get<double>();
            } else if (key == "specific_heat_jpkgk") {
                m.specific_heat = value.get<double>();
            } else {
                throw InvalidInputError("material '" + name + "': unknown key '" + key + "'");
            }
        }
        add(std::move(m));
    }
}

SolidMaterial get_material(std::string_view name) {
    static const MaterialLibrary builtins;
    return builtins.get(name);
}

CoolantProps water_at_reference() {
    return CoolantProps{"water", 998.2, 1.003e-3, 4182.0, 0.6, 20.0};
}

} // namespace coldplate
