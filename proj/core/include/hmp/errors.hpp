#ifndef HMP_ERRORS_HPP
#define HMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hmp {

/// Bad regulation data or an unresolvable level reference.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Instance or schedule fails semantic validation. Carries every violation found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A train whose regulation-derived window is empty or outside the horizon.
class InfeasibleTrainError : public std::runtime_error {
public:
    explicit InfeasibleTrainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hmp

#endif
