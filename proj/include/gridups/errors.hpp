#pragma once

#include <stdexcept>
#include <string>

namespace gridups {

// Error categories map 1:1 onto CLI exit codes (1, 2, 3).
struct invalid_input_error : std::runtime_error {
    explicit invalid_input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct inadmissible_parameter_error : std::runtime_error {
    explicit inadmissible_parameter_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct invariant_violation_error : std::logic_error {
    explicit invariant_violation_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace gridups
