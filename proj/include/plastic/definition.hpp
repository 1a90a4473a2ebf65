#pragma once

// Substitution definition files.
//
//   # comment
//   alphabet: a b
//   rule: a -> a b
//   rule: b -> a
//   lengths: 1 1        (optional, alphabet order)
//
// Tokens are whitespace separated, so letter names may have several
// characters.

#include "plastic/spectral.hpp"
#include "plastic/symbolic.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace plastic {

struct SubstitutionFile
{
  Substitution substitution;
  std::optional<LengthVector> lengths;

  bool operator==(const SubstitutionFile &other) const;
};

/// Throws ParseError carrying the offending line number.
SubstitutionFile parse_definition(std::string_view text);

/// Reads and parses a file; unreadable files raise InputError.
SubstitutionFile read_definition(const std::string &path);

/// Canonical text form; parse_definition(serialize(f)) == f.
std::string serialize(const SubstitutionFile &file);

} // namespace plastic
