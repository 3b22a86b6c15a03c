#include "liegyro/trajectory_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace liegyro {

std::vector<TrajectoryRow> to_rows(const Trajectory& traj) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(traj.size());
    for (const TrajectorySample& s : traj) {
        TrajectoryRow r;
        r.t = s.t;
        r.omega = {s.state.omega.x, s.state.omega.y, s.state.omega.z};
        r.r = s.state.r.a;
        r.energy = s.invariants.energy;
        r.m = {s.invariants.momentum.x, s.invariants.momentum.y, s.invariants.momentum.z};
        rows.push_back(r);
    }
    return rows;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static const char* kHeader =
    "t,omega1,omega2,omega3,r11,r12,r13,r21,r22,r23,r31,r32,r33,E,m1,m2,m3";

void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows,
               const std::vector<std::string>& meta_lines) {
    for (const std::string& line : meta_lines) out << "# " << line << "\n";
    out << kHeader << "\n";
    for (const TrajectoryRow& r : rows) {
        out << format_double(r.t);
        for (double v : r.omega) out << "," << format_double(v);
        for (double v : r.r) out << "," << format_double(v);
        out << "," << format_double(r.energy);
        for (double v : r.m) out << "," << format_double(v);
        out << "\n";
    }
}

std::vector<TrajectoryRow> read_csv(std::istream& in) {
    std::vector<TrajectoryRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kHeader) throw std::runtime_error("read_csv: unexpected header: " + line);
            header_seen = true;
            continue;
        }
        std::array<double, 17> vals;
        size_t pos = 0;
        for (int k = 0; k < 17; ++k) {
            size_t next = line.find(',', pos);
            std::string field =
                next == std::string::npos ? line.substr(pos) : line.substr(pos, next - pos);
            if (field.empty()) throw std::runtime_error("read_csv: empty field in row: " + line);
            char* end = nullptr;
            vals[k] = std::strtod(field.c_str(), &end);
            if (end == field.c_str() || *end != '\0')
                throw std::runtime_error("read_csv: bad number '" + field + "'");
            if (next == std::string::npos) {
                if (k != 16) throw std::runtime_error("read_csv: short row: " + line);
                pos = line.size();
            } else {
                pos = next + 1;
            }
        }
        TrajectoryRow r;
        r.t = vals[0];
        for (int k = 0; k < 3; ++k) r.omega[k] = vals[1 + k];
        for (int k = 0; k < 9; ++k) r.r[k] = vals[4 + k];
        r.energy = vals[13];
        for (int k = 0; k < 3; ++k) r.m[k] = vals[14 + k];
        rows.push_back(r);
    }
    if (!header_seen) throw std::runtime_error("read_csv: missing header row");
    return rows;
}

void write_json(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                const std::string& metadata_json) {
    nlohmann::json doc;
    doc["metadata"] = metadata_json.empty() ? nlohmann::json::object()
                                            : nlohmann::json::parse(metadata_json);
    nlohmann::json arr = nlohmann::json::array();
    for (const TrajectoryRow& r : rows) {
        nlohmann::json row;
        row["t"] = r.t;
        row["omega"] = r.omega;
        row["r"] = r.r;
        row["E"] = r.energy;
        row["m"] = r.m;
        arr.push_back(std::move(row));
    }
    doc["rows"] = std::move(arr);
    out << doc.dump(2) << "\n";
}

}  // namespace liegyro
