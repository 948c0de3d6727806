#pragma once

#include <stdexcept>
#include <string>

namespace ncpi {

/// Text or JSON input that could not be parsed (expressions, model files).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A degree/term/dimension cap was exceeded. Explicit, never silent truncation.
class cap_error : public std::runtime_error {
public:
    explicit cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ncpi
