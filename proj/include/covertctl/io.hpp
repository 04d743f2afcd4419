// File output (always atomic: temp file + rename) and the CSV formats.
#pragma once

#include <stdexcept>
#include <string>

#include "covertctl/linalg.hpp"
#include "covertctl/trajectory.hpp"

namespace covertctl {

/// Filesystem-level failure; the CLI maps this to exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Doubles render with 12 significant digits everywhere.
std::string format_double(double v);

/// Writes content to path via a temp file in the same directory + rename.
void write_text_atomic(const std::string &path, const std::string &content);

std::string read_text(const std::string &path);

/// Header `n,x,u`, one row per state X_1..X_n.
std::string trajectory_to_csv(const Trajectory &traj);
Trajectory trajectory_from_csv(const std::string &text);

/// Row-major, one matrix row per line, no header.
std::string matrix_to_csv(const Matrix &m);

} // namespace covertctl
