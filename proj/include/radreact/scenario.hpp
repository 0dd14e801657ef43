#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "radreact/csv.hpp"

namespace radreact {

// Malformed or incomplete configuration (exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// Files are produced in memory and written only after every computation
// succeeded, so a failing config leaves no partial output.
struct OutputFile {
    std::string name;
    std::string content;
};

struct RunReport {
    Summary summary;
    std::vector<OutputFile> files;
    std::vector<std::filesystem::path> written;
};

enum class Command { Run, Compare, Sweep };

nlohmann::json load_config(const std::filesystem::path& path);

// Computes a scenario without touching the file system. `name` prefixes the
// emitted file names.
RunReport execute(const nlohmann::json& cfg, Command cmd, const std::string& name, int jobs = 1);

// Output directory: RADREACT_OUT_DIR if set, else output.dir, else "radreact_out".
std::filesystem::path output_dir(const nlohmann::json& cfg);
// Output name: output.name, else the config file stem.
std::string output_name(const nlohmann::json& cfg, const std::filesystem::path& config_path);

// load, execute, write <name>.summary.txt plus the trajectory files.
RunReport run_file(const std::filesystem::path& config_path, Command cmd, int jobs = 1);

// Least-squares slope of log y against log x.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace radreact
