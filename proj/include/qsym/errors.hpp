#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsym {

using Value = std::int64_t;
using IntList = std::vector<Value>;

// Bad input: malformed lists, out-of-range values, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Internal consistency failure: dirty ancillas, broken sortedness, a
// non-total comparison. Always a bug or an unsupported input shape.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

std::string to_string(const IntList& values);

} // namespace qsym
