#pragma once

#include <span>
#include <vector>

#include "qdspin/cavity.hpp"
#include "qdspin/protocol.hpp"
#include "qdspin/statevec.hpp"

namespace qdspin::analysis {

/// Resonant operating point, all rates in units of kappa.
struct OperatingPoint {
    double kappa_s_over_kappa = 0.0;
    double g_over_kappa = 0.0;
    double gamma_over_kappa = 0.1;
};

/// Closed-form gate fidelity as a function of x = kappa_s/kappa on the
/// balanced curve: (x^4 + 16) / (x^4 + 16 x^2 + 16). Requires x >= 0.
double fidelity_formula_x(double x);

/// The same fidelity expressed through y = g/kappa:
/// (200 y^4 + 1) / (200 y^4 + 3). Requires y >= 0.
double fidelity_formula_g(double y);

/// Coupling that balances reflection against uncoupled transmission,
/// |r| = |t0|, at gamma = 0.1 kappa: g/kappa = sqrt(1/(10x) - x/40).
/// Defined for x in (0, 2); throws std::domain_error outside.
double balanced_coupling(double x);

/// Inverse of balanced_coupling: the side-leakage ratio at which a given
/// coupling y = g/kappa is balanced, x = 2 (sqrt(100 y^4 + 1) - 10 y^2).
/// Defined for y > 0; throws std::domain_error otherwise.
double balanced_leakage(double y);

/// Fidelity after exciton dephasing over the cavity photon lifetime tau
/// with coherence time t2: returns fidelity * exp(-tau/t2), so the amount
/// removed is fidelity * (1 - exp(-tau/t2)). Requires fidelity in [0, 1],
/// tau >= 0, t2 > 0.
double dephasing_adjustment(double fidelity, double tau, double t2);

/// Input ensembles the simulated fidelity is averaged over. Spins are
/// ordered (control, target).
enum class Ensemble {
    FourBasis,             ///< the four computational two-spin states
    UniformSuperposition,  ///< control in (up+down)/sqrt2, target up or down
    Combined,              ///< both of the above (six inputs, the default)
};

/// The concrete input states of an ensemble, each a unit two-spin state.
std::vector<QuantumState> ensemble_inputs(Ensemble ensemble);

struct SimulationOptions {
    Ensemble ensemble = Ensemble::Combined;
    cavity::SignConvention convention = cavity::SignConvention::Formula;
    bool wrong_port_is_loss = false;
};

struct SimulationResult {
    /// Mean over inputs of the probability-weighted branch fidelity against
    /// the direct gate action, conditioned on detection.
    double fidelity;
    /// Mean over inputs of the total detected probability.
    double success_probability;
};

/// Runs the measurement-based gate in leaky mode at a resonant operating
/// point and scores every detection branch against the direct gate action.
SimulationResult simulate_cnot_fidelity(const OperatingPoint& point,
                                        const SimulationOptions& options = {});

/// Same, over a caller-supplied list of two-spin input states
/// (options.ensemble is ignored).
SimulationResult simulate_cnot_fidelity(const OperatingPoint& point,
                                        std::span<const QuantumState> inputs,
                                        const SimulationOptions& options = {});

enum class SweepAxis { KappaS, G };

/// One point of a fidelity sweep along the balanced curve. Out-of-domain
/// points carry NaN in the columns that cannot be computed there.
struct SweepRow {
    double x;             ///< kappa_s/kappa
    double g_over_kappa;  ///< balanced partner of x
    double f_formula;
    double f_sim;
    double success_prob;
};

struct SweepRequest {
    SweepAxis axis = SweepAxis::KappaS;
    /// Inclusive swept range, lo <= hi, visited as lo, lo+step, ...
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    double gamma_over_kappa = 0.1;
    SimulationOptions options{};
};

/// Evaluates formula and simulation along the swept axis; the other
/// coordinate follows the balanced condition. Rows come out sorted by the
/// swept value. Throws std::invalid_argument on an empty range or a
/// non-positive step; out-of-domain grid points become NaN rows instead of
/// aborting the sweep.
std::vector<SweepRow> sweep(const SweepRequest& request);

}  // namespace qdspin::analysis
