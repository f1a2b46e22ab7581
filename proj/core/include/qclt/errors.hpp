#ifndef QCLT_ERRORS_HPP
#define QCLT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qclt {

// Bad user-supplied parameters or config (CLI exit code 2).
struct invalid_parameter : std::runtime_error {
    explicit invalid_parameter(const std::string& msg) : std::runtime_error(msg) {}
};

// A density matrix that fails PSD / unit-trace checks.
struct invalid_state : std::runtime_error {
    explicit invalid_state(const std::string& msg) : std::runtime_error(msg) {}
};

// Hilbert-space dimension above the configured cap.
struct resource_limit : std::runtime_error {
    explicit resource_limit(const std::string& msg) : std::runtime_error(msg) {}
};

// Zero-variance spectral measure: standardization impossible.
struct degenerate_spectrum : std::runtime_error {
    explicit degenerate_spectrum(const std::string& msg) : std::runtime_error(msg) {}
};

// Not enough sampled distances to fit a decay model.
struct insufficient_data : std::runtime_error {
    explicit insufficient_data(const std::string& msg) : std::runtime_error(msg) {}
};

// A decomposition/bound precondition failed (CLI exit code 3).
// Carries the names of the violated constraints.
struct window_violation : std::runtime_error {
    std::vector<std::string> failed;
    window_violation(const std::string& msg, std::vector<std::string> which)
        : std::runtime_error(msg), failed(std::move(which)) {}
};

// The envelope formula needs c1 < 1/2; treated as a window condition.
struct envelope_inapplicable : window_violation {
    explicit envelope_inapplicable(const std::string& msg)
        : window_violation(msg, {"c1 < 1/2"}) {}
};

} // namespace qclt

#endif
