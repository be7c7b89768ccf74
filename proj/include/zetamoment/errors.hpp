#pragma once

#include <stdexcept>
#include <string>

namespace zm {

// Error taxonomy shared by every module. The CLI maps each class to a
// distinct exit code, so keep the hierarchy flat.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mathematical precondition was violated (eta out of range, sigma too
// close to the divergence boundary, t below the first admissible ordinate).
struct domain_error : error {
    using error::error;
};

// An argument exceeds a table limit or grid cap.
struct range_error : error {
    using error::error;
};

// Requested or implied working precision is insufficient for the
// computation's own accuracy rule.
struct precision_error : error {
    using error::error;
};

// A cost or memory cap would be exceeded.
struct resource_error : error {
    using error::error;
};

// Run configuration is malformed or violates a module cap; rejected before
// any computation starts.
struct config_error : error {
    using error::error;
};

// A file could not be read or written.
struct io_error : error {
    using error::error;
};

}  // namespace zm
