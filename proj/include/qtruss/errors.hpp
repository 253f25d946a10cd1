#pragma once

#include <stdexcept>
#include <string>

namespace qtruss {

/// Base class for all qtruss errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// boolpoly
struct MissingVariableError : Error {
  using Error::Error;
};
struct EmptyPolynomialError : Error {
  using Error::Error;
};

// truss
struct UnknownProblemError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct LengthMismatchError : Error {
  using Error::Error;
};
struct InvalidAssignmentError : Error {
  using Error::Error;
};
struct SingularStiffnessError : Error {
  using Error::Error;
};

// symfem
struct NoFreeDofError : Error {
  using Error::Error;
};
struct ZeroLengthError : Error {
  using Error::Error;
};
struct ZeroDeterminantError : Error {
  using Error::Error;
};

// pipeline / solvers
struct ParamError : Error {
  using Error::Error;
};
struct SingularPointError : Error {
  using Error::Error;
};
struct TooManyVariablesError : Error {
  using Error::Error;
};
struct SamplerFailureError : Error {
  using Error::Error;
};
struct AllIterationsInvalidError : Error {
  using Error::Error;
};

}  // namespace qtruss
