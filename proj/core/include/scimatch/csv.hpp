#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace scimatch::csv {

// Minimal RFC-4180-ish reader: quoted fields, embedded commas/quotes,
// CRLF tolerant. No multi-line fields; the corpus schemas never need them.
class Reader {
public:
    explicit Reader(const std::string& path);

    // False at EOF. Throws std::runtime_error on malformed input,
    // message includes path and 1-based line number.
    bool next(std::vector<std::string>& fields);

    size_t line() const { return line_; }
    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
    size_t line_ = 0;
};

// Reads the header row and returns column indices for the named columns,
// erroring out on any missing name.
std::vector<size_t> require_header(Reader& r, const std::vector<std::string>& names);

class Writer {
public:
    explicit Writer(const std::string& path);
    void row(const std::vector<std::string>& fields);
    ~Writer();

private:
    std::ofstream out_;
    std::string path_;
};

std::string quote_if_needed(const std::string& s);

// Fixed-format numeric field helpers so outputs are byte-stable run to run.
std::string fmt_double(double v);   // shortest round-trip-ish, %.10g
std::string fmt_int(long long v);

long long parse_int(const std::string& s, const Reader& ctx, const std::string& col);
double parse_double(const std::string& s, const Reader& ctx, const std::string& col);
bool parse_bool(const std::string& s, const Reader& ctx, const std::string& col);

std::vector<std::string> split_list(const std::string& s, char sep = ';');

}  // namespace scimatch::csv
