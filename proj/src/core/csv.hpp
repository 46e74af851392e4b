#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace linproc::csv {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);
std::string format_uint(std::uint64_t x);

double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

/// RFC 4180 field quoting: fields with comma, quote, CR or LF are quoted.
std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

/// Splits one unquoted-or-quoted CSV record into fields.
std::vector<std::string> split_row(std::string_view line);

std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace linproc::csv
