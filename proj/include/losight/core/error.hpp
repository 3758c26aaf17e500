#pragma once

#include <stdexcept>
#include <string>

namespace losight {

// Exit-code classes used by the CLI: usage 1, data/format 2, numeric 3.

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace losight
