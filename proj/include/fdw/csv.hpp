#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fdw::csv {

/// Splits one RFC 4180 record. Quoted fields may contain commas and doubled
/// quotes; embedded newlines are not supported.
std::vector<std::string> split(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row

    /// Column index by header name; throws DataError if absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a header line and data rows, skipping blank lines and lines that
/// start with '#'. Every row must have as many fields as the header.
Table read(std::istream& in, std::string_view source_name);

std::string quote(std::string_view field);

}  // namespace fdw::csv
