#pragma once

#include <stdexcept>
#include <string>

namespace plastic {

// Every library failure derives from Error. The CLI maps the concrete type to
// an exit code: InputError/ParseError -> 1, PreconditionError -> 2,
// ConvergenceError -> 3, anything else -> 4.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error
{
public:
  using Error::Error;
};

class ParseError : public InputError
{
public:
  ParseError(int line, const std::string &what)
    : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
  {
  }

  int line() const { return line_; }

private:
  int line_;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  using Error::Error;
};

// A search or materialization budget ran out.
class LimitError : public Error
{
public:
  using Error::Error;
};

// Internal cross-check failed; signals a bug rather than bad input.
class ConsistencyError : public Error
{
public:
  using Error::Error;
};

} // namespace plastic
