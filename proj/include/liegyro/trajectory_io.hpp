#pragma once

#include "liegyro/rigidcore.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace liegyro {

// Flat row of the CSV exchange format. Column order is fixed:
// t, omega1..3, r11..r33 (row-major), E, m1..3.
struct TrajectoryRow {
    double t = 0.0;
    std::array<double, 3> omega{};
    std::array<double, 9> r{};
    double energy = 0.0;
    std::array<double, 3> m{};
};

std::vector<TrajectoryRow> to_rows(const Trajectory& traj);

// Round-trip-exact decimal rendering (17 significant digits).
std::string format_double(double v);

// Writes optional "# ..." metadata lines, the mandatory header row, then the
// data rows. Values are serialized with format_double so that read_csv
// reproduces every field bit-exactly.
void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows,
               const std::vector<std::string>& meta_lines = {});

// Parses the output of write_csv, skipping metadata lines and the header.
// Throws std::runtime_error on malformed rows.
std::vector<TrajectoryRow> read_csv(std::istream& in);

// JSON export: {"metadata": <metadata_json>, "rows": [...]} with each row
// mirroring the CSV columns. metadata_json must be a serialized JSON object.
void write_json(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                const std::string& metadata_json);

}  // namespace liegyro
