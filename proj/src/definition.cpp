#include "plastic/definition.hpp"

#include "plastic/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace plastic {

bool SubstitutionFile::operator==(const SubstitutionFile &other) const
{
  if (!(substitution == other.substitution) || lengths.has_value() != other.lengths.has_value()) {
    return false;
  }
  return !lengths || *lengths == *other.lengths;
}

namespace {

std::vector<std::string> tokens(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

std::string_view trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  auto const last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_length(const std::string &tok, int line)
{
  double value = 0.0;
  auto const *end = tok.data() + tok.size();
  auto const [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "invalid length '" + tok + "'");
  }
  if (value <= 0.0) {
    throw ParseError(line, "nonpositive length " + tok);
  }
  return value;
}

struct PendingRule
{
  Word image;
  int line = 0;
};

} // namespace

SubstitutionFile parse_definition(std::string_view text)
{
  std::optional<Alphabet> alphabet;
  std::map<Letter, PendingRule> rules;
  std::optional<LengthVector> lengths;
  int line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw_line;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view raw = raw_line;
    if (auto const hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    auto const line = trim(raw);
    if (line.empty()) {
      continue;
    }
    auto const colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected 'alphabet:', 'rule:' or 'lengths:'");
    }
    auto const key = trim(line.substr(0, colon));
    auto const body = line.substr(colon + 1);

    if (key == "alphabet") {
      if (alphabet) {
        throw ParseError(line_no, "duplicate alphabet");
      }
      auto names = tokens(body);
      if (names.empty()) {
        throw ParseError(line_no, "empty alphabet");
      }
      try {
        alphabet = Alphabet(std::move(names));
      } catch (const InputError &e) {
        throw ParseError(line_no, e.what());
      }
    } else if (key == "rule") {
      if (!alphabet) {
        throw ParseError(line_no, "rule before alphabet");
      }
      auto const toks = tokens(body);
      if (toks.size() < 2 || toks[1] != "->") {
        throw ParseError(line_no, "expected 'rule: <letter> -> <letters>'");
      }
      auto const lhs = alphabet->find(toks[0]);
      if (!lhs) {
        throw ParseError(line_no, "undeclared letter '" + toks[0] + "'");
      }
      if (rules.count(*lhs)) {
        throw ParseError(line_no, "duplicate rule for '" + toks[0] + "' (first on line " +
                                      std::to_string(rules[*lhs].line) + ")");
      }
      if (toks.size() == 2) {
        throw ParseError(line_no, "empty image for '" + toks[0] + "'");
      }
      PendingRule rule{{}, line_no};
      for (std::size_t k = 2; k < toks.size(); ++k) {
        auto const letter = alphabet->find(toks[k]);
        if (!letter) {
          throw ParseError(line_no, "undeclared letter '" + toks[k] + "'");
        }
        rule.image.push_back(*letter);
      }
      rules.emplace(*lhs, std::move(rule));
    } else if (key == "lengths") {
      if (!alphabet) {
        throw ParseError(line_no, "lengths before alphabet");
      }
      if (lengths) {
        throw ParseError(line_no, "duplicate lengths");
      }
      auto const toks = tokens(body);
      if (toks.size() != alphabet->size()) {
        throw ParseError(line_no, "expected " + std::to_string(alphabet->size()) +
                                      " lengths, got " + std::to_string(toks.size()));
      }
      LengthVector v(static_cast<Eigen::Index>(toks.size()));
      for (std::size_t k = 0; k < toks.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = parse_length(toks[k], line_no);
      }
      lengths = std::move(v);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }

  int const end_line = std::max(line_no, 1);
  if (!alphabet) {
    throw ParseError(end_line, "missing alphabet");
  }
  std::vector<Word> images;
  for (Letter a = 0; a < alphabet->size(); ++a) {
    auto const it = rules.find(a);
    if (it == rules.end()) {
      throw ParseError(end_line, "missing rule for '" + alphabet->name(a) + "'");
    }
    images.push_back(it->second.image);
  }
  return SubstitutionFile{Substitution(*alphabet, std::move(images)), std::move(lengths)};
}

SubstitutionFile read_definition(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_definition(text.str());
}

std::string serialize(const SubstitutionFile &file)
{
  auto const &sub = file.substitution;
  auto const &names = sub.alphabet().letters();
  std::string out = "alphabet:";
  for (auto const &n : names) {
    out += ' ' + n;
  }
  out += '\n';
  for (Letter a = 0; a < sub.size(); ++a) {
    out += "rule: " + names[a] + " ->";
    for (Letter x : sub.image(a)) {
      out += ' ' + names[x];
    }
    out += '\n';
  }
  if (file.lengths) {
    out += "lengths:";
    for (Eigen::Index k = 0; k < file.lengths->size(); ++k) {
      // 17 significant digits round-trip every double.
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.17g", (*file.lengths)(k));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

} // namespace plastic
