#pragma once

// Minimal CSV support for the tool's own emitters: comma separated,
// one header row, no quoting (no field ever contains a comma).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wpan {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict numeric parses; throw std::invalid_argument naming `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& columns);
    CsvWriter& field(std::string_view text);
    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(unsigned long long v);
    CsvWriter& field(unsigned long v) { return field(static_cast<unsigned long long>(v)); }
    void end_row();

private:
    std::ostream& out_;
    bool first_ = true;
};

struct CsvDocument {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name`; throws std::runtime_error "missing column <name>".
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
    const std::string& text(std::size_t row, std::string_view name) const;
};

/// Parses a document; rows must have as many fields as the header.
CsvDocument read_csv(std::istream& in);

}  // namespace wpan
