#pragma once

#include <stdexcept>
#include <string>

namespace scopekit {

enum class ErrorKind {
  IllSorted,
  ContextMismatch,
  NotFlattenable,
  UnknownOperator,
  UnknownHole,
  MissingAlgebraCase,
  BoundExceeded,
  DepthExceeded,
  SyntaxError,
  UnknownVariable,
  SortMismatch,
  NeedUnfulfilled,
  DisabledConstruct,
  ArityMismatch,
  UnsupportedCapability,
  NonConvergence,
  Evaluation,
  InvalidInput,
};

const char* kind_name(ErrorKind k);

struct SourceLoc {
  int line = 0;
  int col = 0;
  bool known() const { return line > 0; }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg, SourceLoc loc = {});
  ErrorKind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string& bare_message() const { return bare_; }

 private:
  ErrorKind kind_;
  SourceLoc loc_;
  std::string bare_;
};

}  // namespace scopekit
