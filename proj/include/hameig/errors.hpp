#pragma once

#include <stdexcept>
#include <string>

namespace hameig {

// non-finite integrand sample at a point not covered by a singularity flag
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double location)
        : std::runtime_error(what + " at s=" + std::to_string(location)),
          location_(location) {}

    double location() const noexcept { return location_; }

private:
    double location_;
};

} // namespace hameig
