#pragma once

#include <stdexcept>
#include <string>

namespace sparsify {

enum class ErrorKind { Parse, Precondition, Numerical };

/// Base of every error the library throws. The kind maps onto the CLI exit
/// codes (2 parse, 3 precondition, 4 numerical).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept;

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0);
    int line() const noexcept { return line_; }

private:
    int line_;
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

// Precondition failures.
struct InvalidGraph : PreconditionError { using PreconditionError::PreconditionError; };
struct BudgetTooSmall : PreconditionError { using PreconditionError::PreconditionError; };
struct InvalidK : PreconditionError { using PreconditionError::PreconditionError; };
struct IncompatibleKernels : PreconditionError { using PreconditionError::PreconditionError; };
struct DisconnectedGraph : PreconditionError { using PreconditionError::PreconditionError; };
struct ProblemTooLarge : PreconditionError { using PreconditionError::PreconditionError; };

// Numerical failures.
struct NonConvergence : NumericalError { using NumericalError::NumericalError; };
struct BarrierViolation : NumericalError { using NumericalError::NumericalError; };
struct SingularUpdate : NumericalError { using NumericalError::NumericalError; };
struct DegenerateGradient : NumericalError { using NumericalError::NumericalError; };

/// No candidate satisfies the two-barrier condition. Carries the potentials
/// at the failing step for diagnosis.
class InfeasibleStep : public NumericalError {
public:
    InfeasibleStep(int step, double upper_potential, double lower_potential, double best_slack);
    int step;
    double upper_potential;
    double lower_potential;
    double best_slack;
};

}  // namespace sparsify
