#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace asg {

enum class ErrorKind {
  NotAssociative,
  NoIdentity,
  NoInverse,
  InvalidTable,
  InvalidElement,
  PreconditionFailed,
  GroupMismatch,
  OrderCapExceeded,
  EmptyInput,
  NotSymmetric,
  MissingIdentity,
  SearchBudgetExceeded,
  LemmaViolation,
  FamilyTooLargeForExhaustive,
  CapExceeded,
  DeclaredConstantMismatch,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` carries the
// machine-readable reason and `member()` the offending family member, if any.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> member = std::nullopt)
      : std::runtime_error(what), kind_(kind), member_(member) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> member() const noexcept { return member_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> member_;
};

// Raised when a checked lemma inequality or containment fails. The reproducer
// is a serialized instance (same format as the CLI input) when one is known.
class LemmaViolation : public Error {
 public:
  LemmaViolation(std::string lemma, const std::string& detail, std::string reproducer = {})
      : Error(ErrorKind::LemmaViolation, lemma + ": " + detail),
        lemma_(std::move(lemma)),
        reproducer_(std::move(reproducer)) {}

  const std::string& lemma() const noexcept { return lemma_; }
  const std::string& reproducer() const noexcept { return reproducer_; }
  void set_reproducer(std::string r) { reproducer_ = std::move(r); }

 private:
  std::string lemma_;
  std::string reproducer_;
};

}  // namespace asg
