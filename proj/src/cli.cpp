#include "plastic/cli.hpp"

#include "plastic/balance.hpp"
#include "plastic/definition.hpp"
#include "plastic/errors.hpp"
#include "plastic/report.hpp"
#include "plastic/spectral.hpp"
#include "plastic/tiling.hpp"
#include "plastic/verdict.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace plastic::cli {

namespace {

struct Common
{
  std::string out_path;
  std::string format;
};

struct Input
{
  SubstitutionFile file;
  std::string digest;
};

Input load(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return Input{parse_definition(text.str()), digest(text.str())};
}

LengthVector parse_lengths(const std::string &text, std::size_t expected, const char *flag)
{
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto const comma = text.find(',', pos);
    auto const tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double v = 0.0;
    auto const *end = tok.data() + tok.size();
    auto const [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (tok.empty() || ec != std::errc() || ptr != end) {
      throw InputError(std::string(flag) + ": invalid number '" + tok + "'");
    }
    values.push_back(v);
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  if (values.size() != expected) {
    throw InputError(std::string(flag) + ": expected " + std::to_string(expected) +
                     " lengths, got " + std::to_string(values.size()));
  }
  LengthVector out = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                       static_cast<Eigen::Index>(values.size()));
  check_lengths(out, expected);
  return out;
}

LengthVector source_lengths(const Input &in, const std::string &flag_value)
{
  auto const n = in.file.substitution.size();
  if (!flag_value.empty()) {
    return parse_lengths(flag_value, n, "--from");
  }
  if (in.file.lengths) {
    return *in.file.lengths;
  }
  return LengthVector::Ones(static_cast<Eigen::Index>(n));
}

void require_format(const Common &c, std::initializer_list<const char *> allowed)
{
  for (auto const *f : allowed) {
    if (c.format == f) {
      return;
    }
  }
  std::string list;
  for (auto const *f : allowed) {
    list += list.empty() ? f : std::string("|") + f;
  }
  throw InputError("--format " + c.format + " is not available here (use " + list + ")");
}

std::string dump(const Json &j)
{
  return j.dump(2) + "\n";
}

Json word_list(const Alphabet &alphabet, const std::vector<Word> &words)
{
  Json out = Json::array();
  for (auto const &w : words) {
    out.push_back(format_word(alphabet, w));
  }
  return out;
}

Json moduli_json(const std::vector<double> &moduli)
{
  Json out = Json::array();
  for (double m : moduli) {
    out.push_back(real_json(m));
  }
  return out;
}

Json evidence_json(const Alphabet &alphabet, const TargetEvidence &e)
{
  Json j;
  j["target"] = format_word(alphabet, e.profile.target);
  j["observed_constant"] = e.profile.observed_constant;
  j["trend"] = to_string(e.growth.trend);
  j["early_max"] = e.growth.early_max;
  j["late_increments"] = e.growth.late_increments;
  j["fitted_slope"] = real_json(e.growth.fitted_slope);
  return j;
}

Json decomposition_json(const LengthVector &from, const LengthVector &to,
                        const LengthChangeDecomposition &d)
{
  Json j;
  j["from"] = real_json(from);
  j["to"] = real_json(to);
  j["scale"] = real_json(d.scale);
  j["delta"] = real_json(d.delta);
  j["contracting"] = to_string(d.contracting);
  j["decay_rate"] = real_json(d.decay_rate);
  std::vector<double> support;
  for (auto const &z : d.support) {
    support.push_back(std::abs(z));
  }
  j["support_moduli"] = moduli_json(support);
  return j;
}

void balance_rows(std::string &csv, const std::string &label, const BalanceProfile &p,
                  const char *evidence)
{
  for (auto const &r : p.rows) {
    std::vector<std::string> fields{label, std::to_string(r.n), std::to_string(r.min),
                                    std::to_string(r.max), std::to_string(r.balance())};
    if (evidence) {
      fields.emplace_back(evidence);
    }
    csv += csv_row(fields);
  }
}

Json profile_json(const std::string &label, const BalanceProfile &p)
{
  Json j;
  j["target"] = label;
  j["one_sided"] = p.one_sided;
  j["observed_constant"] = p.observed_constant;
  j["trend"] = to_string(assess_growth(p).trend);
  Json rows = Json::array();
  for (auto const &r : p.rows) {
    rows.push_back(Json::array({r.n, r.min, r.max, r.balance()}));
  }
  j["rows"] = std::move(rows);
  return j;
}

// --- subcommands -----------------------------------------------------------

struct FactorsArgs
{
  std::string file;
  std::size_t n = 0;
};

std::string cmd_factors(const FactorsArgs &a, const Common &c)
{
  require_format(c, {"text", "csv", "json"});
  auto const in = load(a.file);
  auto const &sub = in.file.substitution;
  auto const set = factors(sub, a.n);
  if (c.format == "json") {
    Json result;
    result["n"] = a.n;
    result["count"] = set.size();
    result["factors"] = word_list(sub.alphabet(), set.factors);
    Json params;
    params["n"] = a.n;
    return dump(envelope("factors", in.digest, params, result));
  }
  std::string out = c.format == "csv" ? "factor\n" : "";
  for (auto const &u : set.factors) {
    out += c.format == "csv" ? csv_row({format_word(sub.alphabet(), u)})
                             : format_word(sub.alphabet(), u) + "\n";
  }
  return out;
}

struct BalanceArgs
{
  std::string file;
  std::size_t max_n = 0;
  std::vector<std::string> words;
  std::optional<std::size_t> collar;
};

std::string cmd_balance(const BalanceArgs &a, const Common &c)
{
  require_format(c, {"csv", "json"});
  auto const in = load(a.file);
  auto const &sub = in.file.substitution;
  std::vector<std::pair<std::string, BalanceProfile>> profiles;
  if (a.collar) {
    auto const rec = collar(sub, *a.collar);
    auto const ps = collared_profiles(sub, rec, a.max_n);
    for (Letter k = 0; k < ps.size(); ++k) {
      profiles.emplace_back(rec.alphabet.name(k), ps[k]);
    }
  } else {
    std::vector<Word> targets;
    if (a.words.empty()) {
      for (Letter k = 0; k < sub.size(); ++k) {
        targets.push_back(Word{k});
      }
    }
    for (auto const &w : a.words) {
      targets.push_back(parse_word(sub.alphabet(), w));
    }
    // One factor set serves every target: each length-n factor is a prefix
    // of some length-max_n factor.
    std::size_t longest = 0;
    for (auto const &t : targets) {
      longest = std::max(longest, t.size());
    }
    if (a.max_n < longest) {
      throw InputError("--max-n must be at least the target length");
    }
    auto const extendable = factors(sub, a.max_n);
    for (auto const &t : targets) {
      if (t.empty()) {
        throw InputError("--word: empty target");
      }
      profiles.emplace_back(format_word(sub.alphabet(), t),
                            balance_profile_from_factors(extendable, t, a.max_n));
    }
  }
  if (c.format == "json") {
    Json result = Json::array();
    for (auto const &[label, p] : profiles) {
      result.push_back(profile_json(label, p));
    }
    Json params;
    params["max_n"] = a.max_n;
    params["words"] = a.words;
    params["collar"] = a.collar ? Json(*a.collar) : Json(nullptr);
    return dump(envelope("balance", in.digest, params, result));
  }
  std::string csv = csv_row({"target", "n", "min", "max", "balance"});
  for (auto const &[label, p] : profiles) {
    balance_rows(csv, label, p, nullptr);
  }
  return csv;
}

struct SpectralArgs
{
  std::string file;
};

std::string cmd_spectral(const SpectralArgs &a, const Common &c)
{
  require_format(c, {"json"});
  auto const in = load(a.file);
  auto const spec = perron_data(substitution_matrix(in.file.substitution));
  Json result;
  Json matrix = Json::array();
  for (Eigen::Index i = 0; i < spec.matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < spec.matrix.cols(); ++j) {
      row.push_back(spec.matrix(i, j));
    }
    matrix.push_back(std::move(row));
  }
  result["alphabet"] = in.file.substitution.alphabet().letters();
  result["matrix"] = std::move(matrix);
  result["perron_value"] = real_json(spec.perron_value);
  result["frequency"] = real_json(spec.frequency);
  result["left_perron"] = real_json(spec.left_perron);
  result["secondary_moduli"] = moduli_json(spec.secondary_moduli);
  result["pisot_certificate"] = spec.pisot_certificate;
  result["certificate_kind"] = certificate_kind;
  return dump(envelope("spectral", in.digest, Json::object(), result));
}

struct PlasticityArgs
{
  std::string file;
  std::string from;
  std::string to;
  std::size_t max_n = 1000;
  std::size_t word_len = 2;
};

std::string cmd_plasticity(const PlasticityArgs &a, const Common &c)
{
  require_format(c, {"json"});
  auto const in = load(a.file);
  auto const &sub = in.file.substitution;
  auto const from = source_lengths(in, a.from);
  auto const to = parse_lengths(a.to, sub.size(), "--to");
  auto const spec = perron_data(substitution_matrix(sub));
  auto const evidence = balance_evidence(sub, a.max_n, a.word_len);
  auto const verdict = plasticity_verdict(evidence, spec);
  auto const dec = decompose_length_change(from, to, spec);

  Json result;
  result["letters"] = to_string(verdict.letters);
  result["total"] = to_string(verdict.total);
  result["pisot_certificate"] = verdict.pisot_certificate;
  result["certificate_kind"] = certificate_kind;
  result["growing_letters"] = word_list(sub.alphabet(), verdict.growing_letters);
  result["growing_words"] = word_list(sub.alphabet(), verdict.growing_words);
  Json letters = Json::array(), words = Json::array();
  for (auto const &e : evidence.letters) {
    letters.push_back(evidence_json(sub.alphabet(), e));
  }
  for (auto const &e : evidence.words) {
    words.push_back(evidence_json(sub.alphabet(), e));
  }
  result["letter_balance"] = std::move(letters);
  result["word_balance"] = std::move(words);
  result["secondary_moduli"] = moduli_json(spec.secondary_moduli);
  result["decomposition"] = decomposition_json(from, to, dec);
  Json params;
  params["from"] = real_json(from);
  params["to"] = real_json(to);
  params["max_n"] = a.max_n;
  params["word_len"] = a.word_len;
  return dump(envelope("plasticity", in.digest, params, result));
}

struct ConjugacyArgs
{
  std::string file;
  std::string from;
  std::string to;
  unsigned max_level = ConjugacyOptions{}.max_level;
  double tolerance = ConjugacyOptions{}.tolerance;
  unsigned samples = 100;
  unsigned origins = 25;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> index;
  double offset = 0.0;
};

std::string cmd_conjugacy(const ConjugacyArgs &a, const Common &c)
{
  require_format(c, {"csv", "json"});
  if (a.origins == 0 && !a.index) {
    throw InputError("--origins must be positive unless --index is given");
  }
  auto const in = load(a.file);
  auto const &sub = in.file.substitution;
  auto const from = source_lengths(in, a.from);
  auto const to = parse_lengths(a.to, sub.size(), "--to");
  ConjugacyOptions options;
  options.max_level = a.max_level;
  options.tolerance = a.tolerance;

  auto const seq = BiInfiniteSequence::of(sub);
  auto origins = sample_origins(seq, from, a.origins, a.seed);
  Tiling const primary = a.index ? Tiling(seq, from, *a.index, a.offset) : origins.front();

  auto const trace = conjugacy(primary, to, options);
  if (c.format == "csv") {
    std::string csv = csv_row({"level", "shift", "offset", "gap", "discrepancy"});
    for (auto const &l : trace.levels) {
      csv += csv_row({std::to_string(l.level), std::to_string(l.shift), format_real(l.offset),
                      format_real(l.gap), format_real(l.discrepancy)});
    }
    return csv;
  }

  std::vector<ConjugacyTrace> traces;
  for (auto const &t : origins) {
    traces.push_back(conjugacy(t, to, options));
  }
  auto const rate_or_null = [](double r) { return r > 0.0 ? real_json(r) : Json(nullptr); };

  Json result;
  result["scale"] = real_json(trace.scale);
  result["matched"] = real_json(trace.matched);
  result["decay_rate"] = real_json(trace.decay_rate);
  result["origin"] = {{"shift", primary.shift()}, {"offset", real_json(primary.offset())}};
  result["converged"] = trace.converged;
  result["converged_level"] = trace.converged_level;
  result["limit"] = {{"shift", trace.limit->shift()},
                     {"offset", real_json(trace.limit->offset())}};
  result["fitted_rate"] = rate_or_null(trace.fitted_rate);
  result["pooled_rate"] =
    traces.empty() ? Json(nullptr)
                   : rate_or_null(pooled_gap_rate(traces, options.fit_from, options.fit_to));
  result["fit_levels"] = Json::array({options.fit_from, options.fit_to});
  result["equivariance_residual"] =
    a.samples > 0 ? real_json(equivariance_residual(primary, to, options, a.samples))
                  : Json(nullptr);

  Json params;
  params["from"] = real_json(from);
  params["to"] = real_json(to);
  params["max_level"] = a.max_level;
  params["tolerance"] = real_json(a.tolerance);
  params["samples"] = a.samples;
  params["origins"] = a.origins;
  params["seed"] = a.seed;
  params["index"] = a.index ? Json(*a.index) : Json(nullptr);
  params["offset"] = a.index ? real_json(a.offset) : Json(nullptr);
  return dump(envelope("conjugacy", in.digest, params, result));
}

struct SturmianArgs
{
  double alpha = 0.0;
  double rho = 0.0;
  std::size_t length = 0;
  std::size_t max_n = 0;
  std::vector<std::string> words;
};

std::string cmd_sturmian(const SturmianArgs &a, const Common &c)
{
  require_format(c, {"csv", "json"});
  auto const word = sturmian_prefix(a.alpha, a.rho, a.length);
  auto const alphabet = sturmian_alphabet();
  std::vector<Word> targets{Word{0}, Word{1}};
  for (auto const &w : a.words) {
    targets.push_back(parse_word(alphabet, w));
  }
  std::vector<std::pair<std::string, BalanceProfile>> profiles;
  for (auto const &t : targets) {
    profiles.emplace_back(format_word(alphabet, t), balance_profile(word, t, a.max_n));
  }
  std::ostringstream key;
  key << "sturmian " << format_real(a.alpha) << ' ' << format_real(a.rho) << ' ' << a.length;
  if (c.format == "json") {
    Json result = Json::array();
    for (auto const &[label, p] : profiles) {
      result.push_back(profile_json(label, p));
    }
    Json params;
    params["alpha"] = real_json(a.alpha);
    params["rho"] = real_json(a.rho);
    params["length"] = a.length;
    params["max_n"] = a.max_n;
    params["words"] = a.words;
    return dump(envelope("sturmian", digest(key.str()), params, result));
  }
  std::string csv = csv_row({"target", "n", "min", "max", "balance", "evidence"});
  for (auto const &[label, p] : profiles) {
    balance_rows(csv, label, p, "one-sided");
  }
  return csv;
}

struct AdversaryArgs
{
  unsigned m = 0;
};

std::string cmd_tm_adversary(const AdversaryArgs &a, const Common &c)
{
  require_format(c, {"csv", "json"});
  auto const count = tm_adversary_count(a.m);
  if (c.format == "csv") {
    return csv_row({"m", "length", "ab_ba_count", "expected", "excess"}) +
           csv_row({std::to_string(a.m), std::to_string(count.length),
                    std::to_string(count.alternating_pairs), format_real(count.expected_pairs),
                    format_real(count.excess)});
  }
  Json result;
  result["length"] = count.length;
  result["ab_ba_count"] = count.alternating_pairs;
  result["expected"] = real_json(count.expected_pairs);
  result["excess"] = real_json(count.excess);
  Json params;
  params["m"] = a.m;
  return dump(envelope("tm-adversary", digest("tm-adversary " + std::to_string(a.m)), params,
                       result));
}

void write_output(const Common &c, const std::string &payload, std::ostream &out)
{
  if (c.out_path.empty() || c.out_path == "-") {
    out << payload;
    out.flush();
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) {
    throw InputError("cannot write " + c.out_path);
  }
  file << payload;
  if (!file.flush()) {
    throw InputError("write failed: " + c.out_path);
  }
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Balance, spectral and conjugacy analysis of substitution sequences", "plastic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  Common common;

  FactorsArgs fa;
  auto *f = app.add_subcommand("factors", "Length-n factors, one per line");
  f->add_option("file", fa.file, "Substitution definition")->required();
  f->add_option("--n", fa.n, "Factor length")->required()->check(CLI::PositiveNumber);

  BalanceArgs ba;
  auto *b = app.add_subcommand("balance", "Balance profiles (CSV: target,n,min,max,balance)");
  b->add_option("file", ba.file, "Substitution definition")->required();
  b->add_option("--max-n", ba.max_n, "Largest window length")
    ->required()
    ->check(CLI::PositiveNumber);
  b->add_option("--word", ba.words, "Target word (repeatable; default: every letter)");
  b->add_option("--collar", ba.collar, "Profile the letters of the radius-R collared language");

  SpectralArgs sa;
  auto *s = app.add_subcommand("spectral", "Substitution matrix and Perron-Frobenius data");
  s->add_option("file", sa.file, "Substitution definition")->required();

  PlasticityArgs pa;
  auto *p = app.add_subcommand("plasticity", "Plasticity verdict and length-change decomposition");
  p->add_option("file", pa.file, "Substitution definition")->required();
  p->add_option("--from", pa.from, "Source lengths L1,L2,... (default: file lengths or ones)");
  p->add_option("--to", pa.to, "Target lengths L1,L2,...")->required();
  p->add_option("--max-n", pa.max_n, "Largest window length")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  p->add_option("--word-len", pa.word_len, "Longest word target")->capture_default_str();

  ConjugacyArgs ca;
  auto *cj = app.add_subcommand("conjugacy", "psi_n trace (CSV) or summary (JSON)");
  cj->add_option("file", ca.file, "Substitution definition")->required();
  cj->add_option("--from", ca.from, "Source lengths (default: file lengths or ones)");
  cj->add_option("--to", ca.to, "Target lengths L1,L2,...")->required();
  cj->add_option("--max-level", ca.max_level, "Last supertile level")->capture_default_str();
  cj->add_option("--tolerance", ca.tolerance, "Convergence tolerance")
    ->capture_default_str()
    ->check(CLI::PositiveNumber);
  cj->add_option("--samples", ca.samples, "Equivariance samples in [-10, 10]")
    ->capture_default_str();
  cj->add_option("--origins", ca.origins, "Random origins for the pooled rate")
    ->capture_default_str();
  cj->add_option("--seed", ca.seed, "Origin sampling seed")->capture_default_str();
  cj->add_option("--index", ca.index, "Sequence index of the traced origin");
  cj->add_option("--offset", ca.offset, "Offset of the traced origin within its tile");

  SturmianArgs sta;
  auto *st = app.add_subcommand("sturmian", "One-sided balance of a mechanical word");
  st->add_option("--alpha", sta.alpha, "Slope in (0,1)")->required();
  st->add_option("--rho", sta.rho, "Intercept in [0,1)")->capture_default_str();
  st->add_option("--length", sta.length, "Prefix length")->required();
  st->add_option("--max-n", sta.max_n, "Largest window length")
    ->required()
    ->check(CLI::PositiveNumber);
  st->add_option("--word", sta.words, "Extra target word (repeatable)");

  AdversaryArgs aa;
  auto *ta = app.add_subcommand("tm-adversary", "ab+ba excess of a Thue-Morse adversarial word");
  ta->add_option("--m", aa.m, "Construction depth")->required()->check(CLI::PositiveNumber);

  // --out and --format are shared; only the default format differs.
  struct Binding
  {
    CLI::App *app;
    const char *format;
    std::function<std::string()> body;
  };
  std::vector<Binding> bindings{
    {f, "text", [&] { return cmd_factors(fa, common); }},
    {b, "csv", [&] { return cmd_balance(ba, common); }},
    {s, "json", [&] { return cmd_spectral(sa, common); }},
    {p, "json", [&] { return cmd_plasticity(pa, common); }},
    {cj, "json", [&] { return cmd_conjugacy(ca, common); }},
    {st, "csv", [&] { return cmd_sturmian(sta, common); }},
    {ta, "json", [&] { return cmd_tm_adversary(aa, common); }},
  };
  for (auto &bind : bindings) {
    bind.app->add_option("--out", common.out_path, "Output path (default stdout)");
    bind.app->add_option("--format", common.format, std::string("Output format (default ") +
                                                      bind.format + ")")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? Success : Usage;
  }

  try {
    for (auto &bind : bindings) {
      if (bind.app->parsed()) {
        if (common.format.empty()) {
          common.format = bind.format;
        }
        write_output(common, bind.body(), out);
        return Success;
      }
    }
    return Usage;
  } catch (const InputError &e) {
    err << "error: " << e.what() << '\n';
    return Usage;
  } catch (const PreconditionError &e) {
    err << "precondition failed: " << e.what() << '\n';
    return Precondition;
  } catch (const ConvergenceError &e) {
    err << "no convergence: " << e.what() << '\n';
    return NoConvergence;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return Internal;
  }
}

} // namespace plastic::cli
