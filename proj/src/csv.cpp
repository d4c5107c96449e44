#include "bregfw/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bregfw::csv {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw Error("cannot format double");
    return {buf, end};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

double parse_double(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw ParseError("not a number: '" + std::string(field) + "'");
    return v;
}

Table read_numeric(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    Table table;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (header_pending) {
            for (auto f : fields) table.header.emplace_back(f);
            width = fields.size();
            header_pending = false;
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(width) + " fields, got " +
                             std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            try {
                row.push_back(parse_double(f));
            } catch (const ParseError& e) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw ParseError(path.string() + ": no data rows");
    return table;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
    const Table t = read_numeric(path, false);
    Matrix m(Eigen::Index(t.rows.size()), Eigen::Index(t.rows.front().size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.rows[i].size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = t.rows[i][j];
    return m;
}

} // namespace bregfw::csv
