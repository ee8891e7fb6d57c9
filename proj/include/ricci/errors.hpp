#ifndef RICCI_ERRORS_HPP
#define RICCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ricci {

enum class ErrorKind {
  // input and construction
  ParseError,
  InvalidLabel,
  SelfLoop,
  DuplicateEdge,
  NotATree,
  UnknownVertex,
  DimensionMismatch,
  IncompatiblePartition,
  // numerical failures
  NotSymmetric,
  NotSymmetrizable,
  NoConvergence,
  SingularBlockSolve,
  SingularBranchBlock,
  IllConditionedEigenspace,
  // precondition violations
  InvalidK,
  DimensionCap,
  NotUnitVector,
  ZeroAtVertex,
  NonpositiveWeight,
  DegenerateEigenvalue,
  NeedAtLeastThreeK,
};

class RicciError : public std::runtime_error {
 public:
  RicciError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw RicciError(kind, msg);
}

// Process exit category used by the CLI: 2 input, 3 numerical, 4 precondition.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidLabel:
    case ErrorKind::SelfLoop:
    case ErrorKind::DuplicateEdge:
    case ErrorKind::NotATree:
    case ErrorKind::UnknownVertex:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::IncompatiblePartition:
      return 2;
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotSymmetrizable:
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularBlockSolve:
    case ErrorKind::SingularBranchBlock:
    case ErrorKind::IllConditionedEigenspace:
      return 3;
    default:
      return 4;
  }
}

}  // namespace ricci

#endif
