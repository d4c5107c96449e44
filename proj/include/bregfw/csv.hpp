#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bregfw/types.hpp"

namespace bregfw::csv {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole field (surrounding blanks allowed). Throws ParseError.
double parse_double(std::string_view field);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a comma-separated numeric table. Blank lines are skipped; every row
/// must have the same number of fields. Errors name the offending line.
Table read_numeric(const std::filesystem::path& path, bool has_header);

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

} // namespace bregfw::csv
