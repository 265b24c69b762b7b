#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coldplate/config.hpp"
#include "coldplate/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cold plate thermal-hydraulic design tool"};
    std::string action_text;
    std::string config_path;
    std::string out_dir;
    bool echo = false;
    app.add_option("action", action_text, "report | sweep | optimize | solve-fv | mesh-study")
        ->required()
        ->check(CLI::IsMember({"report", "sweep", "optimize", "solve-fv", "mesh-study"}));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default: output.dir from the config, else ./out)");
    app.add_flag("--echo-config", echo, "print the fully resolved configuration and exit");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();

    coldplate::RunConfig config;
    try {
        config = coldplate::parse_config(text.str(), coldplate::parse_action(action_text));
    } catch (const coldplate::ConfigError& e) {
        std::cerr << "error: invalid configuration " << config_path << "\n";
        for (const auto& m : e.messages()) std::cerr << "  " << m << "\n";
        return 2;
    }

    if (echo) {
        std::cout << coldplate::resolved_json(config).dump(2) << "\n";
        return 0;
    }
    if (out_dir.empty()) out_dir = config.output_dir.value_or("out");
    return coldplate::run(config, out_dir, std::cout, std::cerr);
}
