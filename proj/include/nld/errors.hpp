#pragma once

#include <stdexcept>
#include <string>

namespace nld {

// Error taxonomy shared by all modules. Everything derives from nld::error
// so callers can catch the whole family at once; the concrete type tells a
// check runner which precondition was violated.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument value (negative time, dt too large, mismatched grids, ...).
struct argument_error : error {
    using error::error;
};

// Non-finite or otherwise corrupt sample data.
struct data_error : error {
    using error::error;
};

// Truncated domain too small for the requested operation (tail guard).
struct domain_error : error {
    using error::error;
};

// Requested feature not representable at the current resolution.
struct resolution_error : error {
    using error::error;
};

// Evaluation point outside the truncated domain.
struct range_error : error {
    using error::error;
};

// Degenerate least-squares fit (signal below floating noise).
struct fit_error : error {
    using error::error;
};

// Sampled-kernel table too short for the requested moment.
struct truncation_error : error {
    using error::error;
};

// Quadrature could not reach the requested accuracy.
struct accuracy_error : error {
    using error::error;
};

// Config / input file syntax problem.
struct parse_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

} // namespace nld
