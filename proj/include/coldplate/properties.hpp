#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coldplate {

struct SolidMaterial {
    std::string name;
    double thermal_conductivity = 0.0; // W/(m K)
    double density = 0.0;              // kg/m^3
    double specific_heat = 0.0;        // J/(kg K)

    bool operator==(const SolidMaterial&) const = default;
};

// Constant-property coolant; no temperature dependence.
struct CoolantProps {
    std::string name;
    double density = 0.0;               // kg/m^3
    double dynamic_viscosity = 0.0;     // Pa s
    double specific_heat = 0.0;         // J/(kg K)
    double thermal_conductivity = 0.0;  // W/(m K)
    double reference_temperature = 0.0; // degC

    double prandtl() const { return dynamic_viscosity * specific_heat / thermal_conductivity; }

    bool operator==(const CoolantProps&) const = default;
};

// Throws InvalidInputError when a numeric field is not strictly positive.
void check(const SolidMaterial& m);
void check(const CoolantProps& c);

// Registry of solid materials. Built-ins are copper, aluminum and
// stainless-steel with the property values solver packages ship as defaults.
class MaterialLibrary {
public:
    MaterialLibrary();

    const SolidMaterial& get(std::string_view name) const;
    bool contains(std::string_view name) const;
    std::vector<std::string> names() const;

    // Adds or replaces a record.
    void add(SolidMaterial m);

    // Merges a JSON object keyed by material name over the current records:
    // {"name": {"conductivity_wpmk": .., "density_kgpm3": .., "specific_heat_jpkgk": ..}}.
    // Missing fields of an existing record keep their values.
    void merge(const nlohmann::json& user);

private:
    std::map<std::string, SolidMaterial, std::less<>> records_;
};

// Lookup in the built-in library.
SolidMaterial get_material(std::string_view name);

// Water at 20 degC.
CoolantProps water_at_reference();

} // namespace coldplate
