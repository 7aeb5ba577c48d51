#ifndef GARI_ERRORS_HPP
#define GARI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gari {

struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

struct model_inconsistency : std::runtime_error {
    explicit model_inconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_check : std::runtime_error {
    explicit degenerate_check(const std::string& msg) : std::runtime_error(msg) {}
};

struct scheduling_violation : std::runtime_error {
    explicit scheduling_violation(const std::string& msg) : std::runtime_error(msg) {}
};

struct infeasible_mapping : std::runtime_error {
    explicit infeasible_mapping(const std::string& msg) : std::runtime_error(msg) {}
};

struct stale_hazard : std::runtime_error {
    explicit stale_hazard(const std::string& msg) : std::runtime_error(msg) {}
};

struct backpressure_overflow : std::runtime_error {
    explicit backpressure_overflow(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gari

#endif
