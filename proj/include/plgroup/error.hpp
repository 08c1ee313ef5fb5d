#pragma once

#include <stdexcept>
#include <string>

namespace plgroup {

/// Input does not describe a valid object (bad syntax, broken invariant).
/// The CLI maps this to exit status 2.
class malformed : public std::invalid_argument {
public:
    explicit malformed(const std::string& what) : std::invalid_argument(what) {}
};

/// Input is well formed but the requested object does not exist
/// (theta mismatch, non-membership, failed precondition of a construction).
/// The CLI maps this to exit status 1.
class refused : public std::runtime_error {
public:
    explicit refused(const std::string& what) : std::runtime_error(what) {}
};

} // namespace plgroup
