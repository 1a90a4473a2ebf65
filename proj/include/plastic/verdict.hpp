#pragma once

// Plasticity classification from balance evidence and the spectral
// certificate.

#include "plastic/balance.hpp"
#include "plastic/spectral.hpp"

#include <vector>

namespace plastic {

enum class LetterVerdict
{
  PlasticCertified,   // every secondary eigenvalue has modulus < 1
  PlasticEvidence,    // no certificate, letter balance bounded in range
  NotPlasticEvidence, // letter balance grew in range
};

enum class TotalVerdict
{
  TotallyPlasticEvidence,
  GrowthObserved,
};

const char *to_string(LetterVerdict v);
const char *to_string(TotalVerdict v);

/// The certificate is the plain spectral one, not a homological condition.
inline constexpr const char *certificate_kind = "spectral: all secondary moduli < 1";

struct PlasticityVerdict
{
  LetterVerdict letters = LetterVerdict::PlasticEvidence;
  TotalVerdict total = TotalVerdict::TotallyPlasticEvidence;
  bool pisot_certificate = false;
  std::vector<Word> growing_letters;
  std::vector<Word> growing_words;
};

/// Throws ConsistencyError when the certificate holds but letter growth was
/// observed.
PlasticityVerdict plasticity_verdict(const BalanceEvidence &evidence, const SpectralData &spec);

} // namespace plastic
