#include "qdspin/cavity.hpp"

#include <cmath>
#include <stdexcept>

namespace qdspin::cavity {

namespace {

void check_rates(const CavityParams& params) {
    if (!(params.kappa > 0.0)) {
        throw std::invalid_argument("cavity: kappa must be positive");
    }
    if (params.g < 0.0 || params.kappa_s < 0.0 || params.gamma < 0.0) {
        throw std::invalid_argument("cavity: g, kappa_s and gamma must be nonnegative");
    }
}

// t for one value of g; t0 is the same expression at g = 0.
Complex transmission(const CavityParams& p, double g) {
    const Complex i(0.0, 1.0);
    const Complex dipole = i * (p.omega_x - p.omega) + p.gamma / 2.0;
    const Complex cav = i * (p.omega_c - p.omega) + p.kappa + p.kappa_s / 2.0;
    const Complex denom = dipole * cav + g * g;
    if (std::abs(denom) == 0.0) {
        throw std::domain_error("cavity: scattering amplitudes are singular "
                                "(g = 0, gamma = 0 and probe on the dipole resonance)");
    }
    return -p.kappa * dipole / denom;
}

}  // namespace

ScatteringAmplitudes compute_amplitudes(const CavityParams& params) {
    check_rates(params);
    ScatteringAmplitudes amps;
    amps.t0 = transmission(params, 0.0);
    amps.r0 = 1.0 + amps.t0;
    amps.t = transmission(params, params.g);
    amps.r = 1.0 + amps.t;
    return amps;
}

ScatteringAmplitudes resonant_amplitudes(double kappa_s, double gamma, double g) {
    CavityParams params;
    params.g = g;
    params.kappa_s = kappa_s;
    params.gamma = gamma;
    params.omega = 0.0;
    params.omega_c = 0.0;
    params.omega_x = 0.0;
    return compute_amplitudes(params);
}

ScatteringAmplitudes ideal_limit() {
    return ScatteringAmplitudes{Complex(-1.0), Complex(0.0), Complex(0.0), Complex(1.0)};
}

namespace {

// The photon couples to the dipole transition when its circular component
// seen by the dot (s_z) matches the spin state.
bool is_hot(PhotonLabel photon, Spin spin) {
    return (photon.s_z() > 0) == (spin == Spin::Up);
}

// Columns are input (photon, spin) pairs, photon slow. Spin is preserved;
// each column has weight on the reflected (flipped) label and the unchanged
// one only.
Matrix interaction_matrix(Complex hot_flip, Complex hot_keep,
                          Complex cold_flip, Complex cold_keep) {
    Matrix m(8);
    for (int p = 0; p < 4; ++p) {
        const PhotonLabel photon = PhotonLabel::from_index(p);
        const int flipped = photon.flipped().index();
        for (int s = 0; s < 2; ++s) {
            const std::size_t col = static_cast<std::size_t>(2 * p + s);
            const bool hot = is_hot(photon, static_cast<Spin>(s));
            m(static_cast<std::size_t>(2 * flipped + s), col) = hot ? hot_flip : cold_flip;
            m(static_cast<std::size_t>(2 * p + s), col) = hot ? hot_keep : cold_keep;
        }
    }
    return m;
}

void check_targets(const QuantumState& state, std::size_t photon, std::size_t spin) {
    const RegisterLayout& layout = state.layout();
    if (photon >= layout.size() || layout.kind(photon) != SubsystemKind::Photon) {
        throw std::invalid_argument("cavity: first target must be a photon subsystem");
    }
    if (spin >= layout.size() || layout.kind(spin) != SubsystemKind::Spin) {
        throw std::invalid_argument("cavity: second target must be a spin subsystem");
    }
}

}  // namespace

Matrix ideal_interaction_matrix() {
    return interaction_matrix(Complex(1.0), Complex(0.0), Complex(0.0), Complex(-1.0));
}

Matrix leaky_interaction_matrix(const ScatteringAmplitudes& amps, SignConvention convention) {
    if (convention == SignConvention::Formula) {
        return interaction_matrix(amps.r, amps.t, amps.r0, amps.t0);
    }
    return interaction_matrix(Complex(std::abs(amps.r)), Complex(std::abs(amps.t)),
                              Complex(-std::abs(amps.r0)), Complex(-std::abs(amps.t0)));
}

QuantumState ideal_interaction(const QuantumState& state, std::size_t photon, std::size_t spin) {
    check_targets(state, photon, spin);
    return apply_local_map(state, {photon, spin}, ideal_interaction_matrix());
}

QuantumState leaky_interaction(const QuantumState& state, std::size_t photon, std::size_t spin,
                               const ScatteringAmplitudes& amps, SignConvention convention) {
    check_targets(state, photon, spin);
    return apply_local_map(state, {photon, spin}, leaky_interaction_matrix(amps, convention));
}

}  // namespace qdspin::cavity
