#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvlsw {

/// One subprocess: scale j (1-based) of channel p (0-based).
struct SubprocessRef {
  int scale = 1;
  int channel = 0;
  auto operator<=>(const SubprocessRef&) const = default;
};

/// (j, p) paired with (j', q).
struct CoherencePair {
  int j = 1;
  int p = 0;
  int jprime = 1;
  int q = 0;

  SubprocessRef first() const { return {j, p}; }
  SubprocessRef second() const { return {jprime, q}; }
  CoherencePair transposed() const { return {jprime, q, j, p}; }
  auto operator<=>(const CoherencePair&) const = default;
};

/// Parses "j:p-j':q" with 1-based scales and channels.
CoherencePair parse_pair(const std::string& text);
std::string format_pair(const CoherencePair& pair);

/// Empty optional marks an undefined point (zero variance, non-positive
/// spectrum, singular partial system).
using CoherenceValue = std::optional<double>;
using CoherenceCurve = std::vector<CoherenceValue>;

enum class CoherenceKind { spectral, windowed, partial };
std::string to_string(CoherenceKind kind);

/// Time-indexed signed coherence per pair. Squared values are derived on
/// demand; significance thresholds are stored on the |rho| scale.
struct CoherenceSurface {
  CoherenceKind kind = CoherenceKind::spectral;
  std::vector<double> time;  // samples: window centers or k
  int lag = 0;
  int window = 0;
  int step = 0;
  std::map<CoherencePair, CoherenceCurve> entries;
  std::map<double, double> thresholds;  // level -> |rho| threshold
  std::size_t negative_diagonals = 0;

  const CoherenceCurve& at(const CoherencePair& pair) const { return entries.at(pair); }
  CoherenceCurve squared(const CoherencePair& pair) const;
  std::size_t undefined_count() const;
};

}  // namespace mvlsw
