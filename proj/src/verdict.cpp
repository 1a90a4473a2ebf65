#include "plastic/verdict.hpp"

#include "plastic/errors.hpp"

namespace plastic {

const char *to_string(LetterVerdict v)
{
  switch (v) {
  case LetterVerdict::PlasticCertified:
    return "PLASTIC_CERTIFIED";
  case LetterVerdict::PlasticEvidence:
    return "PLASTIC_EVIDENCE";
  case LetterVerdict::NotPlasticEvidence:
    return "NOT_PLASTIC_EVIDENCE";
  }
  return "?";
}

const char *to_string(TotalVerdict v)
{
  switch (v) {
  case TotalVerdict::TotallyPlasticEvidence:
    return "TOTALLY_PLASTIC_EVIDENCE";
  case TotalVerdict::GrowthObserved:
    return "GROWTH_OBSERVED";
  }
  return "?";
}

PlasticityVerdict plasticity_verdict(const BalanceEvidence &evidence, const SpectralData &spec)
{
  PlasticityVerdict v;
  v.pisot_certificate = spec.pisot_certificate;
  for (auto const &e : evidence.letters) {
    if (e.growth.trend == BalanceTrend::GrowthObserved) {
      v.growing_letters.push_back(e.profile.target);
    }
  }
  for (auto const &e : evidence.words) {
    if (e.growth.trend == BalanceTrend::GrowthObserved) {
      v.growing_words.push_back(e.profile.target);
    }
  }
  if (spec.pisot_certificate && !v.growing_letters.empty()) {
    throw ConsistencyError("spectral certificate holds but letter balance grew");
  }
  if (spec.pisot_certificate) {
    v.letters = LetterVerdict::PlasticCertified;
  } else if (!v.growing_letters.empty()) {
    v.letters = LetterVerdict::NotPlasticEvidence;
  } else {
    v.letters = LetterVerdict::PlasticEvidence;
  }
  bool const total_growth = !v.growing_letters.empty() || !v.growing_words.empty();
  v.total = total_growth ? TotalVerdict::GrowthObserved : TotalVerdict::TotallyPlasticEvidence;
  return v;
}

} // namespace plastic
