#pragma once

#include <stdexcept>
#include <string>

namespace orlicz_risk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shapes do not line up: vector lengths, atom counts, refinement order.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A constructor or factory received an out-of-range parameter.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// A caller-asserted property (linearity, locality, monotone sequence, ...)
/// was refuted by a probe.
class ContractError : public Error {
public:
  using Error::Error;
};

/// A root or minimum could not be bracketed within the expansion cap.
class NoBracketError : public Error {
public:
  using Error::Error;
};

/// The Luxemburg modular never dropped to 1 within the expansion cap.
class DivergenceError : public Error {
public:
  using Error::Error;
};

} // namespace orlicz_risk
