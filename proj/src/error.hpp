#pragma once

#include <stdexcept>
#include <string>

namespace evrp {

enum class ErrorKind { Argument, Parse, Structure, Io, Limit };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

struct StructureError : Error {
  explicit StructureError(const std::string& what) : Error(ErrorKind::Structure, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

// An exhaustive method was asked for more than it can enumerate.
struct LimitError : Error {
  explicit LimitError(const std::string& what) : Error(ErrorKind::Limit, what) {}
};

}  // namespace evrp
