#pragma once

#include <stdexcept>
#include <string>

namespace matkit {

/// Malformed input: bad expressions, dimension mismatches, unreadable specs.
/// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical or invariant failure: non-finite values, violated construction
/// invariants (bound, semigroup defect). The CLI maps this to exit code 3.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace matkit
