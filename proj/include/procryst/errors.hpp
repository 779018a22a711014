#pragma once

#include <stdexcept>
#include <string>

namespace procryst {

// Thrown when a configured enumeration/closure cap is hit.  Callers treat
// this as "item too large", never as silent truncation.
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

class catalog_error : public std::runtime_error {
public:
    catalog_error(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace procryst
