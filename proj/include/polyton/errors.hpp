#pragma once

#include <stdexcept>
#include <string>

namespace polyton {

/// Input violates a documented invariant (bad JSON, non-normalized measures, ...).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Instance exceeds a configured enumeration cap.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

}  // namespace polyton
