#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace homodyne {

enum class ErrorKind {
  Parameter,       // argument outside an operation's domain
  ModeOutOfRange,
  ZeroSignal,      // d<X>/dphi vanishes, no phase information
  ZeroVariance,
  MixedState,      // pure-state formula requested on a mixed input
  NoThreshold,     // SNL unreachable for any displacement
  CutoffTooSmall,  // Fock truncation exceeds the leakage budget
  GridTooCoarse,   // numeric CFI failed its step-halving check
  NonFinite,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace homodyne
