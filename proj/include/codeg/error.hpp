#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace codeg {

enum class ErrorKind {
  Domain,            // argument outside the operation's domain
  Overflow,          // exact result does not fit the 64/128-bit carrier
  ExactDivision,     // divisor does not divide
  FormulaIntegrality,// family formula not integer-valued at a point
  Parse,             // malformed data file or expression
  Data,              // data file violates an invariant
  Parameter,         // inadmissible family parameters
  EnumerationOverflow,
  NotASubgroup,
  ClassCountCap,
  OracleFailure,
  TableCorruption,
  PositivityFails,
  Reduction,
  CaseOpen,
  Usage,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::ExactDivision: return "exact-division";
    case ErrorKind::FormulaIntegrality: return "formula-integrality";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Data: return "data";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::EnumerationOverflow: return "enumeration-overflow";
    case ErrorKind::NotASubgroup: return "not-a-subgroup";
    case ErrorKind::ClassCountCap: return "class-count-cap";
    case ErrorKind::OracleFailure: return "oracle-failure";
    case ErrorKind::TableCorruption: return "table-corruption";
    case ErrorKind::PositivityFails: return "positivity-fails";
    case ErrorKind::Reduction: return "reduction";
    case ErrorKind::CaseOpen: return "case-open";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace codeg
