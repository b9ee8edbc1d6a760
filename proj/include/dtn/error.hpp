#pragma once

#include <stdexcept>
#include <string>

namespace dtn {

// Malformed input text (WKT, settings, serialized trees).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int column = -1)
        : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        std::string s = "parse error at line " + std::to_string(line);
        if (column >= 0) s += ", column " + std::to_string(column);
        return s + ": " + msg;
    }
    int line_;
    int column_;
};

// Inconsistent or incomplete scenario configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dtn
