#include "covertctl/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace covertctl {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path() && !target.parent_path().empty() &&
        !fs::exists(target.parent_path()))
        throw IoError("output directory does not exist: " +
                      target.parent_path().string());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename failed for " + target.string() + ": " + ec.message());
    }
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trajectory_to_csv(const Trajectory &traj) {
    std::ostringstream out;
    out << "n,x,u\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        out << (i + 1) << ',' << format_double(traj.states[i]) << ','
            << format_double(traj.controls[i]) << '\n';
    return out.str();
}

Trajectory trajectory_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,x,u", 0) != 0)
        throw std::invalid_argument("trajectory CSV: missing 'n,x,u' header");
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string field;
        if (!std::getline(row, field, ','))
            throw std::invalid_argument("trajectory CSV: malformed row: " + line);
        std::getline(row, field, ',');
        const double x = std::stod(field);
        std::getline(row, field, ',');
        const double u = std::stod(field);
        traj.states.push_back(x);
        traj.controls.push_back(u);
    }
    return traj;
}

std::string matrix_to_csv(const Matrix &m) {
    std::ostringstream out;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    return out.str();
}

} // namespace covertctl
