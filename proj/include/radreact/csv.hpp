#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "radreact/trajectory.hpp"

namespace radreact {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

inline constexpr const char* kTrajectoryHeader = "t,qx,qy,qz,vx,vy,vz,ax,ay,az,energy,schott,radiated_cum";
// Every stride-th sample plus the last one.
std::string trajectory_csv(const Trajectory& traj, std::size_t stride = 1);

// Ordered key = value lines.
using Summary = std::vector<std::pair<std::string, std::string>>;
void add(Summary& s, const std::string& key, double value);
void add(Summary& s, const std::string& key, const std::string& value);
std::string summary_text(const Summary& s);

class IoError : public Error {
public:
    using Error::Error;
};

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace radreact
