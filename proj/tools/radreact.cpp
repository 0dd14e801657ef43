#include <iostream>

#include "CLI11.hpp"
#include "radreact/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"radreact: radiating charge scenarios"};
    app.require_subcommand(1);
    std::string config;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "Run a scenario config");
    run->add_option("config", config, "Scenario JSON")->required();
    auto* compare = app.add_subcommand("compare", "Run a paired comparison config");
    compare->add_option("config", config, "Comparison JSON")->required();
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep config");
    sweep->add_option("config", config, "Sweep JSON")->required();
    sweep->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    radreact::Command cmd = radreact::Command::Run;
    if (compare->parsed()) cmd = radreact::Command::Compare;
    if (sweep->parsed()) cmd = radreact::Command::Sweep;
    try {
        const radreact::RunReport rep = radreact::run_file(config, cmd, jobs);
        for (const auto& p : rep.written) std::cout << p.string() << "\n";
        return 0;
    } catch (const radreact::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const radreact::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const radreact::Error& e) {
        std::cerr << "error [" << e.module() << "]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
