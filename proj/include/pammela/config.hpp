#pragma once

#include <fstream>
#include <map>
#include <string>

#include "pammela/errors.hpp"

namespace pammela {

// `key = value` lines; blank lines and #-comments ignored.
inline std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorClass::IoError, "cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        std::size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            raise(ErrorClass::FormatError,
                  path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
    }
    return kv;
}

} // namespace pammela
