#pragma once

#include <stdexcept>
#include <string>

namespace sepkit {

// Base for every error raised by the library. Validation problems with
// caller input derive from InvalidInput; internal numerical defects derive
// directly from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class IndexOutOfRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidBipartition : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotUnitary : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotOrthonormal : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotHermitian : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DegenerateSpectrum : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotCommuting : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class IncompleteSet : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InputsNotSeparable : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InputsNotOrthogonal : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InputsDependent : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnsupportedBasis : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Iteration cap hit in an iterative factorization.
class NotConverged : public Error {
 public:
  using Error::Error;
};

// The minor scan, the minor-sum measure and the Schmidt rank disagreed at
// the requested tolerance.
class CriteriaDisagreement : public Error {
 public:
  using Error::Error;
};

}  // namespace sepkit
