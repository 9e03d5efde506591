#pragma once

#include <stdexcept>
#include <string>

namespace flowsched {

// Raised when the supplied transport data is an isometry (all eigenvalue
// deviations below threshold), for which no nontrivial schedule exists.
class TrivialTransportError : public std::domain_error {
public:
    explicit TrivialTransportError(const std::string& what)
        : std::domain_error(what) {}
};

// Raised when a transport map fails the monotonicity / positive-derivative
// requirements on the requested domain.
class MapNotAdmissibleError : public std::domain_error {
public:
    explicit MapNotAdmissibleError(const std::string& what)
        : std::domain_error(what) {}
};

}  // namespace flowsched
