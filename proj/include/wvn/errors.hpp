#ifndef WVN_ERRORS_HPP
#define WVN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wvn {

// Numerical failures: step underflow, enumeration cap exceeded, guarded pole
// where a finite value is required. CLI maps these to exit code 2.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct step_underflow_error : numerical_error {
    explicit step_underflow_error(const std::string& msg) : numerical_error(msg) {}
};

struct cap_exceeded_error : numerical_error {
    explicit cap_exceeded_error(const std::string& msg) : numerical_error(msg) {}
};

// Invalid operator data (CLI exit code 1).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wvn

#endif
