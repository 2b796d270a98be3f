#include "deconv/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "deconv/errors.hpp"

namespace deconv::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_signal(const std::filesystem::path& path, const GridSignal& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "t,value\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out << format_double(s.grid.node(i)) << ',' << format_double(s.values[i]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

GridSignal read_signal(const std::filesystem::path& path, GridStyle style) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,value", 0) != 0)
        throw IoError("bad signal header in " + path.string());
    std::vector<double> ts, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("bad row in " + path.string());
        ts.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (ts.size() < 2) throw IoError("too few rows in " + path.string());

    const double dt = ts[1] - ts[0];
    if (style == GridStyle::endpoint) {
        const int cells = static_cast<int>(ts.size()) - 1;
        return {Grid(ts.back(), cells, style), std::move(vs)};
    }
    const int cells = static_cast<int>(ts.size());
    return {Grid(dt * cells, cells, style), std::move(vs)};
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 == header.size() ? '\n' : ',');
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 == row.size() ? '\n' : ',');
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace deconv::csv
