#include "dnl/csv.hpp"

#include <charconv>
#include <system_error>

#include "dnl/errors.hpp"

namespace dnl::csv {

namespace {

std::vector<std::string> split_fields(const std::string& row) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = row.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(row.substr(start));
            return fields;
        }
        fields.push_back(row.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

}  // namespace

Reader::Reader(const std::filesystem::path& path, const std::vector<std::string>& header)
    : in_(path), file_name_(path.string()), arity_(header.size()) {
    if (!in_) throw LoadError(file_name_ + ": cannot open file");
    std::string first;
    if (!std::getline(in_, first)) throw LoadError(file_name_ + ": empty file, expected header");
    ++line_;
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first != join(header)) {
        fail("expected header '" + join(header) + "', got '" + first + "'");
    }
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string row;
    while (std::getline(in_, row)) {
        ++line_;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (row.empty()) continue;
        fields = split_fields(row);
        if (fields.size() != arity_) {
            fail("expected " + std::to_string(arity_) + " fields, got " +
                 std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

void Reader::fail(const std::string& what) const {
    throw LoadError(file_name_ + ":" + std::to_string(line_) + ": " + what);
}

double parse_double(const Reader& r, const std::string& field) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || field.empty()) {
        r.fail("unparsable number '" + field + "'");
    }
    return v;
}

std::int64_t parse_int(const Reader& r, const std::string& field) {
    std::int64_t v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || field.empty()) {
        r.fail("unparsable integer '" + field + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace dnl::csv
