#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pqt::csv {

/// Shortest round-trip decimal form (never locale-dependent).
std::string format(double v);
std::string format(std::int64_t v);
std::string format(std::uint64_t v);

/// UTF-8, header row, '.' decimal separator, '\n' line ends.
void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws when missing
    std::vector<double> numeric_column(const std::string& name) const;
};

Table read(const std::filesystem::path& path);

}  // namespace pqt::csv
