#pragma once

#include <stdexcept>
#include <string>

namespace jmbell {

/// Parameter outside the domain of a construction (q0², ε, N).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class RankError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class UnknownVertex : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

class InvalidStructure : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Enumeration over subsets or strategies would exceed its size limit.
class TooManyVertices : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Every vertex set is compatible; there is nothing to violate.
class TrivialStructure : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class MaterializeLimitExceeded : public std::length_error {
  public:
    using std::length_error::length_error;
};

class LimitExceeded : public std::length_error {
  public:
    using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical self-check failed (non-PSD state, broken POVM, ...).
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace jmbell
