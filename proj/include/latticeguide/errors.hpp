#ifndef LATTICEGUIDE_ERRORS_HPP
#define LATTICEGUIDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace latticeguide {

enum class Errc {
  NonPositiveParameter,
  NonFinite,
  SingularFrequency,
  InsideSpectrum,
  QuadratureFailure,
  ClassificationViolation,
  GapUnverified,
  NormalizationInconsistency,
  DegenerateField,
  SizeLimit,
  ResolutionTooCoarse,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonPositiveParameter: return "NonPositiveParameter";
    case Errc::NonFinite: return "NonFinite";
    case Errc::SingularFrequency: return "SingularFrequency";
    case Errc::InsideSpectrum: return "InsideSpectrum";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::ClassificationViolation: return "ClassificationViolation";
    case Errc::GapUnverified: return "GapUnverified";
    case Errc::NormalizationInconsistency: return "NormalizationInconsistency";
    case Errc::DegenerateField: return "DegenerateField";
    case Errc::SizeLimit: return "SizeLimit";
    case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
  }
  return "Unknown";
}

class SpectralError : public std::runtime_error {
 public:
  SpectralError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace latticeguide

#endif  // LATTICEGUIDE_ERRORS_HPP
