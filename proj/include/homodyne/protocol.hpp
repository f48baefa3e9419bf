#pragma once

#include <variant>

#include "homodyne/gaussian_state.hpp"
#include "homodyne/state_spec.hpp"

namespace homodyne {

inline constexpr int kModeA = 0;
inline constexpr int kModeB = 1;

struct IdealLO {};
struct FiniteLO {
  Complex beta;
};
using LocalOscillator = std::variant<IdealLO, FiniteLO>;

/// Interferometer and measurement settings: BS1 (1/2) -> phase phi on path A
/// -> BS2 (T) -> balanced homodyne on output A against the local oscillator.
struct ProtocolConfig {
  StateSpec input = Coherent{};
  double phi = 0.0;
  double transmissivity = 1.0;
  LocalOscillator lo = IdealLO{};
  BeamSplitterConvention convention = BeamSplitterConvention::Real;
};

void validate(const ProtocolConfig& cfg);

/// Two-mode state after BS1, before the phase shift. With the real convention
/// BS1 is oriented so both paths receive +alpha/sqrt(2) (no reflection sign).
GaussianState after_first_splitter(const StateSpec& input,
                                   BeamSplitterConvention convention = BeamSplitterConvention::Real);

/// Full two-mode output state after BS2.
GaussianState propagate(const ProtocolConfig& cfg);

/// Reduced state of output port A, the mode seen by the homodyne detector.
GaussianState output_mode(const ProtocolConfig& cfg);

const FiniteLO* finite_lo(const ProtocolConfig& cfg);

}  // namespace homodyne
