#pragma once

#include <stdexcept>
#include <string>

namespace ltwist {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LTWIST_ERROR(Name) \
    class Name : public Error { \
    public: \
        using Error::Error; \
    };

LTWIST_ERROR(PoleError)
LTWIST_ERROR(DegenerateError)
LTWIST_ERROR(NotPrimeError)
LTWIST_ERROR(PrincipalError)
LTWIST_ERROR(InvariantError)
LTWIST_ERROR(MissingPrimeError)
LTWIST_ERROR(SingularError)
LTWIST_ERROR(PoleSampleError)
LTWIST_ERROR(NearZeroError)
LTWIST_ERROR(InconclusiveError)
LTWIST_ERROR(IsolationError)
LTWIST_ERROR(PreconditionError)

#undef LTWIST_ERROR

// Carries the error bound actually reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class TailError : public Error {
public:
    TailError(const std::string& what, double bound) : Error(what), bound_(bound) {}
    double bound() const { return bound_; }

private:
    double bound_;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace ltwist
