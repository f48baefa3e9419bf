#include "homodyne/protocol.hpp"

#include <cmath>

#include "homodyne/error.hpp"

namespace homodyne {

void validate(const ProtocolConfig& cfg) {
  validate(cfg.input);
  require(std::isfinite(cfg.phi), ErrorKind::Parameter, "phi must be finite");
  require(cfg.transmissivity >= 0.0 && cfg.transmissivity <= 1.0, ErrorKind::Parameter,
          "transmissivity T must lie in [0, 1]");
  if (const auto* lo = finite_lo(cfg)) {
    require(std::isfinite(std::abs(lo->beta)) && std::abs(lo->beta) > 0.0, ErrorKind::Parameter,
            "finite local oscillator needs |beta| > 0");
  }
}

GaussianState after_first_splitter(const StateSpec& input, BeamSplitterConvention convention) {
  const GaussianState in = make_state(input).tensor(GaussianState::vacuum(1));
  if (convention == BeamSplitterConvention::Real) {
    // Ordering (B, A) puts the minus sign on the vacuum port.
    return apply_beamsplitter(in, kModeB, kModeA, 0.5, convention);
  }
  return apply_beamsplitter(in, kModeA, kModeB, 0.5, convention);
}

GaussianState propagate(const ProtocolConfig& cfg) {
  validate(cfg);
  GaussianState s = after_first_splitter(cfg.input, cfg.convention);
  s = apply_phase(s, kModeA, cfg.phi);
  return apply_beamsplitter(s, kModeA, kModeB, cfg.transmissivity, cfg.convention);
}

GaussianState output_mode(const ProtocolConfig& cfg) { return reduce(propagate(cfg), kModeA); }

const FiniteLO* finite_lo(const ProtocolConfig& cfg) { return std::get_if<FiniteLO>(&cfg.lo); }

}  // namespace homodyne
