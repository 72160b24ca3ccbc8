#pragma once

#include <stdexcept>
#include <string>

namespace mop {

/// Error identities; each names the violated invariant or precondition.
enum class Err {
  // trees
  Cyclic,
  Disconnected,
  Unstable,
  DuplicateTailLabel,
  InvalidLabel,
  UnknownVertex,
  MissingTail,
  TailLabelClash,
  NoSuchEdge,
  SourceTargetMismatch,
  TailContracted,
  NonInjectiveRelabeling,
  InvalidMorphism,
  // symmetric / ncf
  NotBijective,
  NotPosetInGroupoids,
  // mgt
  ModulusMismatch,
  NotADivisor,
  DoesNotDescend,
  LevelMismatch,
  InvalidFamily,
  // shared
  OutOfRange,
  ParseError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::Cyclic: return "Cyclic";
    case Err::Disconnected: return "Disconnected";
    case Err::Unstable: return "Unstable";
    case Err::DuplicateTailLabel: return "DuplicateTailLabel";
    case Err::InvalidLabel: return "InvalidLabel";
    case Err::UnknownVertex: return "UnknownVertex";
    case Err::MissingTail: return "MissingTail";
    case Err::TailLabelClash: return "TailLabelClash";
    case Err::NoSuchEdge: return "NoSuchEdge";
    case Err::SourceTargetMismatch: return "SourceTargetMismatch";
    case Err::TailContracted: return "TailContracted";
    case Err::NonInjectiveRelabeling: return "NonInjectiveRelabeling";
    case Err::InvalidMorphism: return "InvalidMorphism";
    case Err::NotBijective: return "NotBijective";
    case Err::NotPosetInGroupoids: return "NotPosetInGroupoids";
    case Err::ModulusMismatch: return "ModulusMismatch";
    case Err::NotADivisor: return "NotADivisor";
    case Err::DoesNotDescend: return "DoesNotDescend";
    case Err::LevelMismatch: return "LevelMismatch";
    case Err::InvalidFamily: return "InvalidFamily";
    case Err::OutOfRange: return "OutOfRange";
    case Err::ParseError: return "ParseError";
  }
  return "Unknown";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw DomainError(code, what);
}

}  // namespace mop
