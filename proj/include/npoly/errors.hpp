#ifndef NPOLY_ERRORS_HPP_
#define NPOLY_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace npoly
{

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// The level set is unbounded (or numerically so) along a direction.
class DegenerateDirection : public Error
{
public:
  using Error::Error;
};

/// A training run produced a non-finite or exploding loss.
class DivergenceError : public Error
{
public:
  using Error::Error;
};

class NotPolygonal : public Error
{
public:
  using Error::Error;
};

class NotPolyhedral : public Error
{
public:
  using Error::Error;
};

/// Recovered combinatorics do not satisfy V - E + F = 2.
class EulerViolation : public Error
{
public:
  using Error::Error;
};

class AmbiguousMatch : public Error
{
public:
  using Error::Error;
};

class OriginNotInterior : public Error
{
public:
  using Error::Error;
};

class VersionMismatch : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

}  // namespace npoly

#endif  // NPOLY_ERRORS_HPP_
