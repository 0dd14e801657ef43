#include "radreact/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

namespace radreact {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

void put(std::string& out, double x) {
    out += format_double(x);
}

void put_row(std::string& out, const TrajectorySample& s) {
    put(out, s.t);
    for (const Vec3* v : {&s.s.q, &s.s.v, &s.s.a})
        for (int i = 0; i < 3; ++i) {
            out += ',';
            put(out, (*v)[i]);
        }
    for (double x : {s.energy, s.schott, s.radiated}) {
        out += ',';
        put(out, x);
    }
    out += '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, std::size_t stride) {
    if (stride == 0) stride = 1;
    std::string out = kTrajectoryHeader;
    out += '\n';
    const std::size_t n = traj.samples.size();
    for (std::size_t i = 0; i < n; ++i)
        if (i % stride == 0 || i + 1 == n) put_row(out, traj.samples[i]);
    return out;
}

void add(Summary& s, const std::string& key, double value) { s.emplace_back(key, format_double(value)); }
void add(Summary& s, const std::string& key, const std::string& value) { s.emplace_back(key, value); }

std::string summary_text(const Summary& s) {
    std::string out;
    for (const auto& [k, v] : s) out += k + " = " + v + "\n";
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cli", "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id();
    const fs::path tmp = path.string() + suffix.str();
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cli", "cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.close();
        if (!f) {
            fs::remove(tmp, ec);
            throw IoError("cli", "write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cli", "cannot rename into " + path.string());
    }
}

}  // namespace radreact
