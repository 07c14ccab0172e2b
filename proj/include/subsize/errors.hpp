#ifndef SUBSIZE_ERRORS_HPP
#define SUBSIZE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subsize {

/// An element encoding that is not canonical for the group it was handed to.
class malformed_element : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Bad user input: unknown builtin, parameter out of range, bad JSON shape.
class spec_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A greedy construction ran out of budget before it could satisfy one of
/// its defining conditions.
class construction_stalled : public std::runtime_error
{
public:
  construction_stalled(const std::string &what, int condition)
  : std::runtime_error(what), condition_(condition)
  {}

  int condition() const noexcept { return condition_; }

private:
  int condition_;
};

} // namespace subsize

#endif // SUBSIZE_ERRORS_HPP
