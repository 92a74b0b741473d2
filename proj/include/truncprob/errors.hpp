#pragma once

#include <stdexcept>
#include <string>

namespace truncprob {

// Invalid argument values. The CLI maps this to exit code 2.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A truncation method that does not apply to the distribution family
// (Massart requires [0,1]-bounded terms).
class UnsupportedMethodError : public DomainError {
public:
    explicit UnsupportedMethodError(const std::string& what) : DomainError(what) {}
};

// Work limit exceeded. The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Violated internal invariant; a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace truncprob
