#pragma once

#include <stdexcept>
#include <string>

namespace curtainlab {

// Error taxonomy shared by the whole library.  The CLI maps kinds to exit
// codes: input errors -> 2, budget errors -> 3, everything else -> 1.
enum class ErrorKind {
  WindowNotCheckable,
  DegenerateWall,
  HorizonExceeded,
  NoMedian,
  NotConvex,
  UnknownGenerator,
  BudgetExceeded,
  IntervalTooWide,
  TooClose,
  NotGeodesic,
  PartialAction,
  FlipPreconditionFailed,
  ChainBroken,
  NoGrowth,
  SeparationNotAchieved,
  ParseError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

}  // namespace curtainlab
