#include "dresp/csvio.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <system_error>

#include "dresp/tariff.hpp"

namespace dresp {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

double parse_double(const std::string& s, const std::string& context, int line) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream os;
        os << context << ": line " << line << ": '" << s << "' is not a number";
        throw ValidationError(os.str());
    }
    return v;
}

int parse_int(const std::string& s, const std::string& context, int line) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        std::ostringstream os;
        os << context << ": line " << line << ": '" << s << "' is not an integer";
        throw ValidationError(os.str());
    }
    return v;
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    CsvTable table;
    table.path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (lineno == 1) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            std::ostringstream os;
            os << path << ": line " << lineno << ": expected " << table.header.size()
               << " columns, got " << cells.size();
            throw ValidationError(os.str());
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw ValidationError(path + ": missing header line");
    return table;
}

size_t column_index(const CsvTable& table, const std::string& name) {
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == name) return i;
    }
    throw ValidationError(table.path + ": missing column '" + name + "'");
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error(path + ": cannot open for writing");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error(path_ + ": write failed");
}

}  // namespace dresp
