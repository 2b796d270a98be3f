#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deconv/grid.hpp"

namespace deconv::csv {

/// 17 significant digits, '.' separator.
std::string format_double(double v);

/// Header `t,value`, one row per node, LF endings.
void write_signal(const std::filesystem::path& path, const GridSignal& s);

/// Reads a file produced by write_signal. The grid style cannot be recovered
/// from the node list alone, so the caller supplies it.
GridSignal read_signal(const std::filesystem::path& path, GridStyle style);

/// Generic table writer: header row then string cells.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

} // namespace deconv::csv
