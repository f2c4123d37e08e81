#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdspin/cavity.hpp"
#include "qdspin/statevec.hpp"

namespace qdspin::protocol {

/// Spin Hadamard in the (up, down) basis: up -> (up+down)/sqrt2,
/// down -> (up-down)/sqrt2.
Matrix hadamard_matrix();

QuantumState hadamard_spin(const QuantumState& state, std::size_t spin);

/// Interaction model the protocol stages run under. Lossless mode uses the
/// unit-amplitude reflection/transmission rules; leaky mode uses the supplied
/// scattering coefficients.
struct Mode {
    bool lossless = true;
    cavity::ScatteringAmplitudes amplitudes{};
    cavity::SignConvention convention = cavity::SignConvention::Formula;
    /// When set, any photon amplitude leaving through the port the detectors
    /// do not watch is discarded before detection. The scattering rules
    /// preserve the photon's s_z, which already confines the probe to the
    /// watched ports, so this is a consistency knob rather than extra loss.
    bool wrong_port_is_loss = false;

    static Mode ideal();
    static Mode leaky(const cavity::ScatteringAmplitudes& amplitudes,
                      cavity::SignConvention convention = cavity::SignConvention::Formula,
                      bool wrong_port_is_loss = false);
};

struct PcgOutcome {
    Polarization polarization;
    /// Which detector clicked. Probe (R, down): R -> D2, L -> D1.
    /// Probe (L, up): R -> D4, L -> D3.
    std::string detector;
    /// +1 when the probe polarization came back unchanged (even spin
    /// parity), -1 when it toggled (odd parity).
    int sign_branch;
};

struct PcgBranch {
    PcgOutcome outcome;
    /// Absolute probability. Over all branches these sum to 1 in lossless
    /// mode and to the survival probability in leaky mode.
    double probability;
    /// Post-measurement state of the original register, probe photon
    /// removed, unit norm. Projection phases are kept as they come out of
    /// the scattering rules.
    QuantumState state;
};

/// Parity-check gate: sends one probe photon through both spins' cavities
/// (spin_a first), measures its polarization and discards it. The probe must
/// be (R, down) or (L, up).
std::vector<PcgBranch> parity_check(const QuantumState& state, std::size_t spin_a,
                                    std::size_t spin_b, PhotonLabel probe, const Mode& mode);

/// One sampled run of the parity-check gate, conditioned on detection.
PcgBranch parity_check_sample(const QuantumState& state, std::size_t spin_a, std::size_t spin_b,
                              PhotonLabel probe, const Mode& mode, std::mt19937_64& rng);

/// Single-spin correction chosen by the classical feed-forward step.
enum class FeedOp { Identity, SigmaZ, MinusSigmaZ, SigmaX };

Matrix feed_op_matrix(FeedOp op);
std::string to_string(FeedOp op);

struct FeedForward {
    FeedOp control_op = FeedOp::Identity;
    FeedOp target_op = FeedOp::Identity;

    bool operator==(const FeedForward&) const = default;
};

/// Correction table keyed on the two parity-check outcomes and the measured
/// ancilla spin.
FeedForward feed_forward(Polarization first, Polarization second, Spin ancilla);

/// Measurement record of one detection branch: the outcome at the first
/// parity check, at the second, and of the ancilla readout.
struct BranchKey {
    Polarization first;
    Polarization second;
    Spin ancilla;

    bool operator==(const BranchKey&) const = default;
};

struct ProtocolRecord {
    /// Ordered (stage, outcome) log, e.g. {"pcg1", "R"}, {"pcg1_detector",
    /// "D2"}, {"ancilla", "up"}.
    std::vector<std::pair<std::string, std::string>> outcomes;
    /// Joint probability of this detection path (product of the stage
    /// probabilities). Sums to 1 over branches in lossless mode, to the
    /// overall success probability in leaky mode.
    double branch_probability;
    /// Correction that was applied, when the protocol has one.
    std::optional<FeedForward> applied_feedforward;
    /// State of the surviving register after the branch, unit norm.
    QuantumState final_state;
};

struct CnotBranch {
    BranchKey key;
    ProtocolRecord record;
};

/// Direct matrix form of the gate on (control, target), control slow: the
/// target spin toggles when the control spin is down.
Matrix cnot_matrix();

/// Measurement-based CNOT between two spins, built from an ancilla spin, two
/// parity checks (probes (R, down) then (L, up)), Hadamards, ancilla readout
/// and the feed-forward correction. Enumerates every detection branch; in
/// lossless mode each branch's final state equals CNOT applied to the input,
/// up to a branch-constant phase.
std::vector<CnotBranch> cnot(const QuantumState& state, std::size_t control, std::size_t target,
                             const Mode& mode);

CnotBranch cnot_sample(const QuantumState& state, std::size_t control, std::size_t target,
                       const Mode& mode, std::mt19937_64& rng);

/// Two-spin Bell states: psi+/- are the even-parity pair
/// (up,up) +/- (down,down), phi+/- the odd-parity pair
/// (up,down) +/- (down,up), each over sqrt2.
enum class BellLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

std::string to_string(BellLabel label);
std::optional<BellLabel> bell_from_string(const std::string& name);

QuantumState prepare_bell(BellLabel label);

struct BellAnalysisResult {
    BellLabel label;
    ProtocolRecord record;
};

/// Bell-state analyzer on two spins: parity check, Hadamard on both, parity
/// check again, both probes (R, down). The two polarization outcomes
/// identify the Bell component: (R,R) -> psi+, (R,L) -> psi-,
/// (L,R) -> phi+, (L,L) -> phi-. On a Bell-state input the identification
/// is deterministic in lossless mode.
std::vector<BellAnalysisResult> bell_analysis(const QuantumState& state, std::size_t spin_a,
                                              std::size_t spin_b, const Mode& mode);

BellAnalysisResult bell_analysis_sample(const QuantumState& state, std::size_t spin_a,
                                        std::size_t spin_b, const Mode& mode,
                                        std::mt19937_64& rng);

}  // namespace qdspin::protocol
