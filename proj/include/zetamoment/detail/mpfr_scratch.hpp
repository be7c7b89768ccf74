#pragma once

#include <mpfr.h>

namespace zm::detail {

// RAII mpfr_t for raw hot loops; the wrapper classes allocate per result,
// which is too much churn inside million-term sums.
struct Scratch {
    mpfr_t v;
    explicit Scratch(long bits) { mpfr_init2(v, bits); }
    ~Scratch() { mpfr_clear(v); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
};

}  // namespace zm::detail
