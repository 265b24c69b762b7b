#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "coldplate/config.hpp"
#include "coldplate/errors.hpp"
#include "coldplate/presets.hpp"
#include "coldplate/serialization.hpp"

using namespace coldplate;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> config_errors(const std::string& text, std::optional<Action> action = Action::report) {
    try {
        parse_config(text, action);
    } catch (const ConfigError& e) {
        return e.messages();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("coldplate_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(COLDPLATE_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("minimal config fills defaults") {
    const auto cfg = parse_config(R"({"preset": "primary_side", "flow": {"v_mps": 1.1}})", Action::report);
    CHECK(cfg.inlet_temperature == 49.0);
    CHECK(cfg.assembly == primary_side());
    CHECK(cfg.coolant == water_at_reference());
    CHECK(cfg.minor_loss_k == 2.0);
    CHECK(cfg.limits.t_max_limit == 135.0);
    CHECK(*cfg.velocity == 1.1);
}

TEST_CASE("misspelled key is reported by name") {
    const auto errors = config_errors(R"({"preset": "primary_side", "flow": {"velocty": 1.1}})");
    CHECK(any_contains(errors, "velocty"));
}

TEST_CASE("every problem is listed at once") {
    const auto errors = config_errors(
        R"({"preset": "primary_side", "flow": {"v_mps": "fast"}, "limits": {"t_max": 1}, "colour": 3})");
    CHECK(errors.size() >= 3);
    CHECK(any_contains(errors, "flow.v_mps"));
    CHECK(any_contains(errors, "t_max"));
    CHECK(any_contains(errors, "colour"));
}

TEST_CASE("parse errors carry line and column") {
    const auto errors = config_errors("{\n  \"preset\": \"primary_side\",\n  \"flow\": {\"v_mps\": 1.1,}\n}");
    REQUIRE(errors.size() == 1);
    CHECK(any_contains(errors, "line 3"));
    CHECK(any_contains(errors, "column"));
}

TEST_CASE("preset and assembly are mutually exclusive and one is required") {
    CHECK(any_contains(config_errors(R"({"flow": {"v_mps": 1}})"), "exactly one"));
    const std::string both = R"({"preset": "primary_side", "assembly": {}, "flow": {"v_mps": 1}})";
    CHECK(any_contains(config_errors(both), "exactly one"));
    CHECK(any_contains(config_errors(R"({"preset": "tertiary_side", "flow": {"v_mps": 1}})"), "tertiary_side"));
}

TEST_CASE("command line and document actions must agree") {
    CHECK(!config_errors(R"({"action": "sweep", "preset": "primary_side", "flow": {"v_mps": 1}})",
                         Action::report)
               .empty());
    const auto cfg = parse_config(R"({"action": "report", "preset": "primary_side", "flow": {"v": 1}})",
                                  std::nullopt);
    CHECK(cfg.action == Action::report);
    CHECK(!config_errors(R"({"preset": "primary_side"})", std::nullopt).empty());
}

TEST_CASE("report needs a velocity and mesh study needs three descending resolutions") {
    CHECK(any_contains(config_errors(R"({"preset": "primary_side"})"), "v_mps"));
    CHECK(any_contains(config_errors(R"({"preset": "primary_side", "flow": {"v_mps": 1},
        "mesh_study": {"resolutions_m": [0.002, 0.001]}})",
                                     Action::mesh_study),
                       "resolutions"));
}

TEST_CASE("sweep values are checked against the axis") {
    const auto errors = config_errors(R"({"preset": "primary_side",
        "sweep": {"axis": "material", "values": ["copper", "adamantium"]}})",
                                      Action::sweep);
    CHECK(any_contains(errors, "adamantium"));
    const auto cfg = parse_config(R"({"preset": "primary_side",
        "sweep": {"axis": "velocity", "values": [0.5, 1.0]}})",
                                  Action::sweep);
    CHECK(cfg.sweep.values.size() == 2);
}

TEST_CASE("material overrides apply to presets") {
    const auto cfg = parse_config(R"({"preset": "primary_side", "flow": {"v_mps": 1},
        "materials": {"copper": {"conductivity_wpmk": 390}}})",
                                  Action::report);
    CHECK(cfg.assembly.plate.material.thermal_conductivity == 390);
}

TEST_CASE("inline assembly round-trips through JSON") {
    for (const auto& a : {primary_side(), primary_side_initial(), secondary_side()}) {
        std::vector<std::string> errors;
        const auto back = assembly_from_json(to_json(a), MaterialLibrary{}, "assembly", errors);
        CHECK(errors.empty());
        CHECK(back == a);
    }
}

TEST_CASE("resolved config parses back to the same run") {
    const auto cfg = parse_config(R"({"preset": "secondary_side", "flow": {"v_mps": 1.4},
        "sweep": {"axis": "cover_thickness", "values": [0.001, 0.0005]}})",
                                  Action::sweep);
    const auto echoed = resolved_json(cfg);
    const auto again = parse_config(echoed.dump(), std::nullopt);
    CHECK(again.assembly == cfg.assembly);
    CHECK(resolved_json(again) == echoed);
    CHECK(echoed["flow"]["inlet_c"] == 49.0);
}

TEST_CASE("CLI report writes identical outputs on repeated runs") {
    const auto dir = scratch("determinism");
    write(dir / "cfg.json", R"({"preset": "primary_side", "flow": {"v_mps": 1.1}})");
    const std::string cfg = (dir / "cfg.json").string();
    REQUIRE(run_cli("report --config " + cfg + " --out " + (dir / "a").string(), dir / "a.log") == 0);
    REQUIRE(run_cli("report --config " + cfg + " --out " + (dir / "b").string(), dir / "b.log") == 0);
    for (const char* name : {"result.json", "result.csv"}) {
        CHECK(fs::exists(dir / "a" / name));
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
    CHECK(slurp(dir / "a.log").find("t_max") != std::string::npos);
}

TEST_CASE("CLI rejects an invalid config without writing outputs") {
    const auto dir = scratch("invalid");
    write(dir / "cfg.json", R"({"preset": "primary_side", "flow": {"velocty": 1.1}})");
    const int code = run_cli("report --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string(),
                             dir / "log");
    CHECK(code != 0);
    CHECK(!fs::exists(dir / "out"));
    CHECK(slurp(dir / "log").find("velocty") != std::string::npos);
}

TEST_CASE("CLI echoes the resolved configuration") {
    const auto dir = scratch("echo");
    write(dir / "cfg.json", R"({"preset": "primary_side", "flow": {"v_mps": 1.1}})");
    REQUIRE(run_cli("report --echo-config --config " + (dir / "cfg.json").string(), dir / "log") == 0);
    const auto echoed = nlohmann::json::parse(slurp(dir / "log"));
    CHECK(echoed["flow"]["inlet_c"] == 49.0);
    CHECK(echoed["assembly"]["plate"]["material"] == "copper");
}

TEST_CASE("CLI solve-fv writes the field dump") {
    const auto dir = scratch("fv");
    write(dir / "cfg.json",
          R"({"preset": "secondary_side", "flow": {"v_mps": 1.1}, "solver": {"resolution_m": 0.002}})");
    REQUIRE(run_cli("solve-fv --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string(),
                    dir / "log") == 0);
    CHECK(fs::exists(dir / "out" / "field.vtk"));
    CHECK(slurp(dir / "out" / "result.csv").rfind("stream,station,x_m,t_coolant_C", 0) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "result.json"));
    CHECK(j["action"] == "solve-fv");
}

TEST_CASE("CLI mesh-study writes the delta table") {
    const auto dir = scratch("mesh");
    write(dir / "cfg.json", R"({"preset": "secondary_side", "flow": {"v_mps": 1.1},
        "mesh_study": {"resolutions_m": [0.002, 0.00175, 0.0015]}})");
    REQUIRE(run_cli("mesh-study --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string(),
                    dir / "log") == 0);
    const auto csv = slurp(dir / "out" / "result.csv");
    CHECK(csv.rfind("cells,t_max_C,delta_K\n", 0) == 0);
}

TEST_CASE("CLI rejects unknown actions") {
    const auto dir = scratch("action");
    write(dir / "cfg.json", R"({"preset": "primary_side", "flow": {"v_mps": 1.1}})");
    CHECK(run_cli("explode --config " + (dir / "cfg.json").string(), dir / "log") != 0);
}

TEST_CASE("shipped sample configs are valid") {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(COLDPLATE_SOURCE_DIR) / "configs")) {
        if (entry.path().extension() != ".json") continue;
        const auto name = entry.path().stem().string();
        std::optional<Action> action;
        if (name.rfind("report", 0) == 0) action = Action::report;
        if (name.rfind("sweep", 0) == 0) action = Action::sweep;
        if (name.rfind("optimize", 0) == 0) action = Action::optimize;
        if (name.rfind("solve_fv", 0) == 0) action = Action::solve_fv;
        if (name.rfind("mesh_study", 0) == 0) action = Action::mesh_study;
        CAPTURE(name);
        REQUIRE(action.has_value());
        CHECK_NOTHROW(parse_config(slurp(entry.path()), action));
        ++seen;
    }
    CHECK(seen >= 5);
}
