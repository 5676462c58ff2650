#ifndef DPATH_ERRORS_HPP
#define DPATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpath {

// Base for every failure raised by the library. Results that are data
// (infeasible instances, cycles, violation lists) are never thrown.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
public:
    using Error::Error;
};

// A search hit its node-expansion cap before reaching a verdict.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class InvalidSolution : public Error {
public:
    using Error::Error;
};

// A cell had no whole grid vertex shared by its row and column paths.
// This contradicts the reduction's correctness and is never recovered.
class ExtractionFailed : public Error {
public:
    using Error::Error;
};

class NotConnected : public Error {
public:
    using Error::Error;
};

class AlreadyReduced : public Error {
public:
    using Error::Error;
};

class Mismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace dpath

#endif
