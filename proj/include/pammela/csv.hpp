#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pammela/errors.hpp"

namespace pammela::csv {

// Minimal RFC-4180-style CSV. Quotes only when a field needs it.

inline std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape(fields[i]);
    }
    out += '\n';
    return out;
}

inline std::vector<std::vector<std::string>> parse(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') { in.get(); field += '"'; }
                else quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',': row.push_back(field); field.clear(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !row.empty()) {
                    row.push_back(field);
                    rows.push_back(std::move(row));
                }
                row.clear(); field.clear(); any = false;
                break;
            default: field += c; any = true; break;
        }
    }
    if (quoted) raise(ErrorClass::FormatError, "unterminated quote in CSV input");
    if (any || !field.empty() || !row.empty()) {
        row.push_back(field);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<std::string>> parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorClass::IoError, "cannot open " + path);
    return parse(in);
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorClass::IoError, "cannot write " + path);
    out << contents;
    if (!out) raise(ErrorClass::IoError, "short write to " + path);
}

} // namespace pammela::csv
