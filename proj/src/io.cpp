#include "dynsolow/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dynsolow {

namespace {

void put(std::ostream& out, double v) {
    out << format_double(v);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        fields.push_back(line.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return fields;
}

double to_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw MalformedValue("csv field", s);
    return v;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    if (traj.reduced) {
        out << "t,s,h,z\n";
        for (std::size_t i = 0; i < traj.size(); ++i) {
            put(out, traj.t[i]);
            out << ',';
            put(out, traj.s[i]);
            out << ',';
            put(out, traj.h[i]);
            out << ',';
            put(out, traj.z[i]);
            out << '\n';
        }
        return;
    }
    out << "t,y,k_s,k_d,k,s,h,xi,regime\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        put(out, traj.t[i]);
        out << ',';
        put(out, traj.y[i]);
        out << ',';
        put(out, traj.k_s[i]);
        out << ',';
        put(out, traj.k_d[i]);
        out << ',';
        put(out, traj.k[i]);
        out << ',';
        put(out, traj.s[i]);
        out << ',';
        put(out, traj.h[i]);
        out << ',';
        put(out, traj.xi[i]);
        out << ',' << (traj.demand_regime[i] ? 1 : 0) << '\n';
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream out;
    write_trajectory_csv(traj, out);
    return out.str();
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw MalformedValue("csv", "empty stream");
    if (!header.empty() && header.back() == '\r') header.pop_back();

    Trajectory traj;
    if (header == "t,s,h,z") {
        traj.reduced = true;
    } else if (header != "t,y,k_s,k_d,k,s,h,xi,regime") {
        throw MalformedValue("csv header", header);
    }

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (traj.reduced) {
            if (fields.size() != 4) throw MalformedValue("csv row", line);
            traj.t.push_back(to_double(fields[0]));
            traj.s.push_back(to_double(fields[1]));
            traj.h.push_back(to_double(fields[2]));
            traj.z.push_back(to_double(fields[3]));
        } else {
            if (fields.size() != 9) throw MalformedValue("csv row", line);
            traj.t.push_back(to_double(fields[0]));
            traj.y.push_back(to_double(fields[1]));
            traj.k_s.push_back(to_double(fields[2]));
            traj.k_d.push_back(to_double(fields[3]));
            traj.k.push_back(to_double(fields[4]));
            traj.s.push_back(to_double(fields[5]));
            traj.h.push_back(to_double(fields[6]));
            traj.xi.push_back(to_double(fields[7]));
            traj.demand_regime.push_back(fields[8] == "1" ? 1 : 0);
        }
    }
    return traj;
}

Trajectory read_trajectory_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_trajectory_csv(in);
}

std::string manifest_text(const TrajectoryManifest& manifest, const ManifestInfo& info) {
    std::ostringstream out;
    out << "# dynsolow run manifest (readable as a config file)\n";
    out << "# version = " << manifest.version << "\n";
    out << "# wall_clock_seconds = " << format_double(info.wall_clock_seconds) << "\n";
    if (!info.overrides.empty()) {
        out << "# overrides =";
        for (const auto& key : info.overrides) out << ' ' << key;
        out << "\n";
    }
    for (const auto& file : info.output_files) out << "# output = " << file << "\n";
    out << serialize_config(manifest.params, manifest.sim);
    return out.str();
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace dynsolow
