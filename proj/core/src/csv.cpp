#include "scimatch/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace scimatch::csv {

namespace {

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Reader::Reader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw std::runtime_error("cannot open " + path);
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string raw;
    if (!std::getline(in_, raw)) return false;
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    fields.clear();
    std::string cur;
    bool quoted = false;
    size_t i = 0;
    const size_t n = raw.size();
    while (i <= n) {
        if (i == n) {
            if (quoted) fail(path_, line_, "unterminated quoted field");
            fields.push_back(cur);
            break;
        }
        char c = raw[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && raw[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                cur.push_back(c);
                ++i;
            }
        } else if (c == '"') {
            if (!cur.empty()) fail(path_, line_, "stray quote inside unquoted field");
            quoted = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
            ++i;
        } else {
            cur.push_back(c);
            ++i;
        }
    }
    return true;
}

std::vector<size_t> require_header(Reader& r, const std::vector<std::string>& names) {
    std::vector<std::string> head;
    if (!r.next(head)) throw std::runtime_error(r.path() + ": empty file, expected header row");
    std::vector<size_t> idx;
    for (const auto& want : names) {
        auto it = std::find(head.begin(), head.end(), want);
        if (it == head.end())
            throw std::runtime_error(r.path() + ": missing required column '" + want + "'");
        idx.push_back(static_cast<size_t>(it - head.begin()));
    }
    return idx;
}

Writer::Writer(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
}

void Writer::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << quote_if_needed(fields[i]);
    }
    out_ << '\n';
}

Writer::~Writer() {
    out_.flush();
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q.push_back(c);
    }
    q.push_back('"');
    return q;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_int(long long v) {
    return std::to_string(v);
}

long long parse_int(const std::string& s, const Reader& ctx, const std::string& col) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        fail(ctx.path(), ctx.line(), "column '" + col + "': not an integer: '" + s + "'");
    }
}

double parse_double(const std::string& s, const Reader& ctx, const std::string& col) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        fail(ctx.path(), ctx.line(), "column '" + col + "': not a number: '" + s + "'");
    }
}

bool parse_bool(const std::string& s, const Reader& ctx, const std::string& col) {
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "1" || t == "true" || t == "yes") return true;
    if (t == "0" || t == "false" || t == "no" || t.empty()) return false;
    fail(ctx.path(), ctx.line(), "column '" + col + "': not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        std::string piece = s.substr(start, p == std::string::npos ? std::string::npos : p - start);
        if (!piece.empty()) out.push_back(piece);
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return out;
}

}  // namespace scimatch::csv
