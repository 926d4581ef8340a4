#include "sparsify/errors.hpp"

#include <sstream>

namespace sparsify {

int Error::exit_code() const noexcept {
    switch (kind_) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Precondition: return 3;
    case ErrorKind::Numerical: return 4;
    }
    return 1;
}

static std::string with_line(const std::string& what, int line) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ": " + what;
}

ParseError::ParseError(const std::string& what, int line)
    : Error(ErrorKind::Parse, with_line(what, line)), line_(line) {}

static std::string infeasible_message(int step, double up, double lo, double slack) {
    std::ostringstream os;
    os.precision(17);
    os << "no update satisfies both barrier conditions at step " << step
       << " (upper potential " << up << ", lower potential " << lo << ", best slack " << slack << ")";
    return os.str();
}

InfeasibleStep::InfeasibleStep(int step_, double up, double lo, double slack)
    : NumericalError(infeasible_message(step_, up, lo, slack)),
      step(step_), upper_potential(up), lower_potential(lo), best_slack(slack) {}

}  // namespace sparsify
