#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace dresp {

// Shortest round-trip decimal form (std::to_chars), so emitted values
// re-parse bit-for-bit.
std::string format_double(double v);
// Fixed decimals, for report columns.
std::string format_fixed(double v, int decimals);

double parse_double(const std::string& s, const std::string& context, int line);
int parse_int(const std::string& s, const std::string& context, int line);

struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // rows[i] parsed from line i+2
    int line_of_row(size_t i) const { return static_cast<int>(i) + 2; }
};

// Reads a comma-separated file with a mandatory header line. Every row
// must have the same arity as the header.
CsvTable read_csv(const std::string& path);

// Column lookup by header name; throws when missing.
size_t column_index(const CsvTable& table, const std::string& name);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace dresp
