#include "cka/params.hpp"

#include <string>

namespace cka {

void ProtocolParams::validate() const {
    if (n_parties < 2) throw std::domain_error("need at least two parties");
    if (s < 1 || s > 8) throw std::domain_error("layer count must be in [1, 8]");
    if (modes() < n_parties)
        throw std::domain_error("detector count 2^s must be at least the party count");
    if (alpha < 0.0) throw std::domain_error("signal amplitude must be non-negative");
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("transmittance must lie in [0, 1]");
    if (p_dark < 0.0 || p_dark >= 1.0)
        throw std::domain_error("dark-count probability must lie in [0, 1)");
    if (!(beta0 > beta1) || beta1 < 0.0)
        throw std::domain_error("decoy intensities must satisfy beta0 > beta1 >= 0");
    if (cutoff < 0 || cutoff % 2 != 0)
        throw std::domain_error("photon-number cutoff must be even and non-negative");
}

QuadratureError::QuadratureError(double achieved, double required)
    : std::runtime_error("phase integral did not converge: achieved relative error " +
                         std::to_string(achieved) + ", required " + std::to_string(required)),
      achieved_rel_error(achieved),
      required_rel_error(required) {}

}  // namespace cka
