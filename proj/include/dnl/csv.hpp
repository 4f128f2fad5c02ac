#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace dnl::csv {

/// Line-oriented reader for the comma-separated files this project exchanges.
/// No quoting: none of the schemas need it (MAC addresses use ':').
class Reader {
public:
    Reader(const std::filesystem::path& path, const std::vector<std::string>& header);

    /// Reads the next data row into `fields`. Returns false at EOF.
    /// Throws LoadError if the row arity differs from the header.
    bool next(std::vector<std::string>& fields);

    const std::string& file_name() const { return file_name_; }
    std::size_t line_number() const { return line_; }

    [[noreturn]] void fail(const std::string& what) const;

private:
    std::ifstream in_;
    std::string file_name_;
    std::size_t line_ = 0;
    std::size_t arity_;
};

/// Strict numeric field parsers; reject trailing garbage and empty fields.
double parse_double(const Reader& r, const std::string& field);
std::int64_t parse_int(const Reader& r, const std::string& field);

/// Shortest round-trip formatting (std::to_chars); reload yields the same bits.
std::string format_double(double v);

}  // namespace dnl::csv
