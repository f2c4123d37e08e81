#include "qdspin/protocol.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qdspin::protocol {

namespace {

const PhotonLabel kProbeEven{Polarization::R, Direction::Down};
const PhotonLabel kProbeOdd{Polarization::L, Direction::Up};

void check_spin(const QuantumState& state, std::size_t index, const char* role) {
    if (index >= state.layout().size() || state.layout().kind(index) != SubsystemKind::Spin) {
        throw std::invalid_argument(std::string("protocol: ") + role +
                                    " must name a spin subsystem");
    }
}

QuantumState scatter(const QuantumState& state, std::size_t photon, std::size_t spin,
                     const Mode& mode) {
    if (mode.lossless) {
        return cavity::ideal_interaction(state, photon, spin);
    }
    return cavity::leaky_interaction(state, photon, spin, mode.amplitudes, mode.convention);
}

// Zeroes photon amplitudes outside the two labels the detectors watch.
// Both valid probes live in the s_z = -1 sector {(R,down), (L,up)}, which the
// scattering rules preserve, so nothing is actually removed here.
QuantumState drop_wrong_port(const QuantumState& state, std::size_t photon, PhotonLabel probe) {
    const std::size_t stride = state.layout().stride(photon);
    const int keep_a = probe.index();
    const int keep_b = probe.flipped().index();
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const int digit = static_cast<int>((i / stride) % 4);
        if (digit != keep_a && digit != keep_b) {
            amps[i] = Complex(0.0);
        }
    }
    return QuantumState(state.layout(), std::move(amps));
}

std::string detector_name(PhotonLabel probe, Polarization outcome) {
    if (probe == kProbeEven) {
        return outcome == Polarization::R ? "D2" : "D1";
    }
    return outcome == Polarization::R ? "D4" : "D3";
}

PcgBranch to_pcg_branch(const MeasurementBranch& branch, std::size_t photon, PhotonLabel probe) {
    const Polarization pol = branch.outcome == 0 ? Polarization::R : Polarization::L;
    PcgOutcome outcome{pol, detector_name(probe, pol), pol == probe.pol ? +1 : -1};
    return PcgBranch{outcome, branch.probability, remove_subsystem(branch.state, photon)};
}

// Shared front half of the parity check: append the probe, scatter it off
// both spins, apply the port filter. The photon sits at the end of the
// layout, index state.layout().size().
QuantumState run_probe(const QuantumState& state, std::size_t spin_a, std::size_t spin_b,
                       PhotonLabel probe, const Mode& mode) {
    if (probe != kProbeEven && probe != kProbeOdd) {
        throw std::invalid_argument("protocol: probe must be (R, down) or (L, up)");
    }
    check_spin(state, spin_a, "spin_a");
    check_spin(state, spin_b, "spin_b");
    if (spin_a == spin_b) {
        throw std::invalid_argument("protocol: parity check needs two distinct spins");
    }
    const std::size_t photon = state.layout().size();
    QuantumState scattered = append_subsystem(state, BasisLabel(probe));
    scattered = scatter(scattered, photon, spin_a, mode);
    scattered = scatter(scattered, photon, spin_b, mode);
    if (mode.wrong_port_is_loss) {
        scattered = drop_wrong_port(scattered, photon, probe);
    }
    return scattered;
}

}  // namespace

Matrix hadamard_matrix() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix h(2);
    h(0, 0) = s;
    h(0, 1) = s;
    h(1, 0) = s;
    h(1, 1) = -s;
    return h;
}

QuantumState hadamard_spin(const QuantumState& state, std::size_t spin) {
    check_spin(state, spin, "hadamard target");
    return apply_local_map(state, {spin}, hadamard_matrix());
}

Mode Mode::ideal() {
    return Mode{};
}

Mode Mode::leaky(const cavity::ScatteringAmplitudes& amplitudes,
                 cavity::SignConvention convention, bool wrong_port_is_loss) {
    Mode mode;
    mode.lossless = false;
    mode.amplitudes = amplitudes;
    mode.convention = convention;
    mode.wrong_port_is_loss = wrong_port_is_loss;
    return mode;
}

std::vector<PcgBranch> parity_check(const QuantumState& state, std::size_t spin_a,
                                    std::size_t spin_b, PhotonLabel probe, const Mode& mode) {
    const std::size_t photon = state.layout().size();
    const QuantumState scattered = run_probe(state, spin_a, spin_b, probe, mode);
    std::vector<PcgBranch> branches;
    for (const MeasurementBranch& branch :
         measure_subsystem(scattered, photon, MeasureBasis::Polarization)) {
        branches.push_back(to_pcg_branch(branch, photon, probe));
    }
    return branches;
}

PcgBranch parity_check_sample(const QuantumState& state, std::size_t spin_a, std::size_t spin_b,
                              PhotonLabel probe, const Mode& mode, std::mt19937_64& rng) {
    const std::size_t photon = state.layout().size();
    const QuantumState scattered = run_probe(state, spin_a, spin_b, probe, mode);
    return to_pcg_branch(sample_subsystem(scattered, photon, MeasureBasis::Polarization, rng),
                         photon, probe);
}

Matrix feed_op_matrix(FeedOp op) {
    Matrix m(2);
    switch (op) {
        case FeedOp::Identity:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case FeedOp::SigmaZ:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        case FeedOp::MinusSigmaZ:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case FeedOp::SigmaX:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
    }
    return m;
}

std::string to_string(FeedOp op) {
    switch (op) {
        case FeedOp::Identity: return "I";
        case FeedOp::SigmaZ: return "Z";
        case FeedOp::MinusSigmaZ: return "-Z";
        case FeedOp::SigmaX: return "X";
    }
    return "?";
}

FeedForward feed_forward(Polarization first, Polarization second, Spin ancilla) {
    // Indexed by (first, second, ancilla) with R/up = 0, L/down = 1.
    static const std::array<FeedForward, 8> table{{
        {FeedOp::MinusSigmaZ, FeedOp::Identity},  // R R up
        {FeedOp::SigmaZ, FeedOp::SigmaX},         // R R down
        {FeedOp::Identity, FeedOp::Identity},     // R L up
        {FeedOp::Identity, FeedOp::SigmaX},       // R L down
        {FeedOp::MinusSigmaZ, FeedOp::SigmaX},    // L R up
        {FeedOp::SigmaZ, FeedOp::Identity},       // L R down
        {FeedOp::Identity, FeedOp::SigmaX},       // L L up
        {FeedOp::Identity, FeedOp::Identity},     // L L down
    }};
    const std::size_t index = (first == Polarization::L ? 4u : 0u) +
                              (second == Polarization::L ? 2u : 0u) +
                              (ancilla == Spin::Down ? 1u : 0u);
    return table[index];
}

namespace {

QuantumState apply_feed_forward(const QuantumState& state, std::size_t control,
                                std::size_t target, const FeedForward& correction) {
    QuantumState out = state;
    if (correction.control_op != FeedOp::Identity) {
        out = apply_local_map(out, {control}, feed_op_matrix(correction.control_op));
    }
    if (correction.target_op != FeedOp::Identity) {
        out = apply_local_map(out, {target}, feed_op_matrix(correction.target_op));
    }
    return out;
}

CnotBranch finish_cnot_branch(const PcgBranch& first, const PcgBranch& second,
                              const MeasurementBranch& readout, std::size_t control,
                              std::size_t target, std::size_t ancilla) {
    const Spin spin_outcome = static_cast<Spin>(readout.outcome);
    const FeedForward correction =
        feed_forward(first.outcome.polarization, second.outcome.polarization, spin_outcome);
    QuantumState corrected = apply_feed_forward(readout.state, control, target, correction);
    ProtocolRecord record{
        {{"pcg1", to_string(first.outcome.polarization)},
         {"pcg1_detector", first.outcome.detector},
         {"pcg2", to_string(second.outcome.polarization)},
         {"pcg2_detector", second.outcome.detector},
         {"ancilla", to_string(spin_outcome)}},
        first.probability * second.probability * readout.probability,
        correction,
        remove_subsystem(corrected, ancilla)};
    return CnotBranch{
        BranchKey{first.outcome.polarization, second.outcome.polarization, spin_outcome},
        std::move(record)};
}

}  // namespace

Matrix cnot_matrix() {
    Matrix m(4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(3, 2) = 1.0;
    m(2, 3) = 1.0;
    return m;
}

std::vector<CnotBranch> cnot(const QuantumState& state, std::size_t control, std::size_t target,
                             const Mode& mode) {
    check_spin(state, control, "control");
    check_spin(state, target, "target");
    if (control == target) {
        throw std::invalid_argument("protocol: control and target must differ");
    }
    const std::size_t ancilla = state.layout().size();
    QuantumState prepared = append_subsystem(state, BasisLabel(Spin::Up));
    prepared = hadamard_spin(prepared, ancilla);

    std::vector<CnotBranch> branches;
    for (const PcgBranch& first : parity_check(prepared, control, ancilla, kProbeEven, mode)) {
        const QuantumState mid = hadamard_spin(hadamard_spin(first.state, ancilla), target);
        for (const PcgBranch& second : parity_check(mid, ancilla, target, kProbeOdd, mode)) {
            const QuantumState late = hadamard_spin(hadamard_spin(second.state, ancilla), target);
            for (const MeasurementBranch& readout :
                 measure_subsystem(late, ancilla, MeasureBasis::Computational)) {
                branches.push_back(
                    finish_cnot_branch(first, second, readout, control, target, ancilla));
            }
        }
    }
    return branches;
}

CnotBranch cnot_sample(const QuantumState& state, std::size_t control, std::size_t target,
                       const Mode& mode, std::mt19937_64& rng) {
    check_spin(state, control, "control");
    check_spin(state, target, "target");
    if (control == target) {
        throw std::invalid_argument("protocol: control and target must differ");
    }
    const std::size_t ancilla = state.layout().size();
    QuantumState prepared = append_subsystem(state, BasisLabel(Spin::Up));
    prepared = hadamard_spin(prepared, ancilla);

    const PcgBranch first = parity_check_sample(prepared, control, ancilla, kProbeEven, mode, rng);
    const QuantumState mid = hadamard_spin(hadamard_spin(first.state, ancilla), target);
    const PcgBranch second = parity_check_sample(mid, ancilla, target, kProbeOdd, mode, rng);
    const QuantumState late = hadamard_spin(hadamard_spin(second.state, ancilla), target);
    const MeasurementBranch readout =
        sample_subsystem(late, ancilla, MeasureBasis::Computational, rng);
    return finish_cnot_branch(first, second, readout, control, target, ancilla);
}

std::string to_string(BellLabel label) {
    switch (label) {
        case BellLabel::PsiPlus: return "psi+";
        case BellLabel::PsiMinus: return "psi-";
        case BellLabel::PhiPlus: return "phi+";
        case BellLabel::PhiMinus: return "phi-";
    }
    return "?";
}

std::optional<BellLabel> bell_from_string(const std::string& name) {
    if (name == "psi+") return BellLabel::PsiPlus;
    if (name == "psi-") return BellLabel::PsiMinus;
    if (name == "phi+") return BellLabel::PhiPlus;
    if (name == "phi-") return BellLabel::PhiMinus;
    return std::nullopt;
}

QuantumState prepare_bell(BellLabel label) {
    const RegisterLayout layout({SubsystemKind::Spin, SubsystemKind::Spin});
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Complex> amps(4, Complex(0.0));
    switch (label) {
        case BellLabel::PsiPlus:
            amps[0] = s;
            amps[3] = s;
            break;
        case BellLabel::PsiMinus:
            amps[0] = s;
            amps[3] = -s;
            break;
        case BellLabel::PhiPlus:
            amps[1] = s;
            amps[2] = s;
            break;
        case BellLabel::PhiMinus:
            amps[1] = s;
            amps[2] = -s;
            break;
    }
    return QuantumState(layout, std::move(amps));
}

namespace {

BellLabel classify_bell(Polarization first, Polarization second) {
    if (first == Polarization::R) {
        return second == Polarization::R ? BellLabel::PsiPlus : BellLabel::PsiMinus;
    }
    return second == Polarization::R ? BellLabel::PhiPlus : BellLabel::PhiMinus;
}

BellAnalysisResult finish_bell_branch(const PcgBranch& first, const PcgBranch& second) {
    ProtocolRecord record{{{"pcg1", to_string(first.outcome.polarization)},
                           {"pcg1_detector", first.outcome.detector},
                           {"pcg2", to_string(second.outcome.polarization)},
                           {"pcg2_detector", second.outcome.detector}},
                          first.probability * second.probability,
                          std::nullopt,
                          second.state};
    return BellAnalysisResult{
        classify_bell(first.outcome.polarization, second.outcome.polarization),
        std::move(record)};
}

}  // namespace

std::vector<BellAnalysisResult> bell_analysis(const QuantumState& state, std::size_t spin_a,
                                              std::size_t spin_b, const Mode& mode) {
    std::vector<BellAnalysisResult> results;
    for (const PcgBranch& first : parity_check(state, spin_a, spin_b, kProbeEven, mode)) {
        const QuantumState mid = hadamard_spin(hadamard_spin(first.state, spin_a), spin_b);
        for (const PcgBranch& second : parity_check(mid, spin_a, spin_b, kProbeEven, mode)) {
            results.push_back(finish_bell_branch(first, second));
        }
    }
    return results;
}

BellAnalysisResult bell_analysis_sample(const QuantumState& state, std::size_t spin_a,
                                        std::size_t spin_b, const Mode& mode,
                                        std::mt19937_64& rng) {
    const PcgBranch first = parity_check_sample(state, spin_a, spin_b, kProbeEven, mode, rng);
    const QuantumState mid = hadamard_spin(hadamard_spin(first.state, spin_a), spin_b);
    const PcgBranch second = parity_check_sample(mid, spin_a, spin_b, kProbeEven, mode, rng);
    return finish_bell_branch(first, second);
}

}  // namespace qdspin::protocol
