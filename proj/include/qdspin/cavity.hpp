#pragma once

#include "qdspin/statevec.hpp"

namespace qdspin::cavity {

/// Physical parameters of one spin-dot-cavity unit. All rates and
/// frequencies are expressed in units of the cavity field decay rate kappa,
/// which is therefore 1 by construction; frequencies are relative to a
/// common origin.
struct CavityParams {
    double g = 0.0;        ///< dot-cavity coupling strength
    double kappa = 1.0;    ///< cavity field decay rate (the unit)
    double kappa_s = 0.0;  ///< side-leakage rate
    double gamma = 0.1;    ///< trion dipole decay rate
    double omega = 0.0;    ///< probe photon frequency
    double omega_c = 0.0;  ///< cavity mode frequency
    double omega_x = 0.0;  ///< trion transition frequency
};

/// Reflection/transmission coefficients of the double-sided cavity:
/// (t0, r0) for the uncoupled (cold) dot, (t, r) for the coupled (hot) dot.
/// They satisfy r = 1 + t and r0 = 1 + t0 identically.
struct ScatteringAmplitudes {
    Complex t0;
    Complex r0;
    Complex t;
    Complex r;
};

/// Sign bookkeeping for the lossy photon-spin map.
///
/// Formula: the complex coefficients exactly as computed, phases included.
/// MagnitudeRule: absolute values with a fixed sign pattern (positive
/// reflection and transmission for the coupled dot, negative for the
/// uncoupled one). Branch phases differ between the two; fidelities at the
/// balanced operating point do not.
enum class SignConvention { Formula, MagnitudeRule };

/// Scattering coefficients at arbitrary detuning. The uncoupled pair is the
/// same expression evaluated at g = 0. Throws std::domain_error on the
/// singular input g = 0, gamma = 0, omega = omega_x (zero over zero).
ScatteringAmplitudes compute_amplitudes(const CavityParams& params);

/// Coefficients for a resonant probe (omega = omega_c = omega_x), reduced to
/// the three rate ratios. Arguments are kappa_s/kappa, gamma/kappa, g/kappa.
ScatteringAmplitudes resonant_amplitudes(double kappa_s, double gamma, double g);

/// Lossless limit: t0 = -1, r0 = 0, t = 0, r = 1.
ScatteringAmplitudes ideal_limit();

/// Unitary photon-spin map of a lossless cavity on the 8-dimensional
/// photon (slow) x spin (fast) factor. A photon whose s_z matches the spin's
/// dipole transition is reflected: polarization and direction both flip,
/// amplitude +1. Otherwise it is transmitted unchanged with amplitude -1.
/// The electron spin is never changed.
Matrix ideal_interaction_matrix();

/// Lossy photon-spin map: the coupled (hot) configuration scatters with
/// amplitudes (r on the flipped label, t on the unchanged one), the
/// uncoupled (cold) one with (r0, t0). Generally a contraction; the missing
/// norm is the side-leakage loss.
Matrix leaky_interaction_matrix(const ScatteringAmplitudes& amps,
                                SignConvention convention = SignConvention::Formula);

QuantumState ideal_interaction(const QuantumState& state, std::size_t photon, std::size_t spin);

QuantumState leaky_interaction(const QuantumState& state, std::size_t photon, std::size_t spin,
                               const ScatteringAmplitudes& amps,
                               SignConvention convention = SignConvention::Formula);

}  // namespace qdspin::cavity
