#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qdspin/statevec.hpp"
#include "test_util.hpp"

using namespace qdspin;
using doctest::Approx;

namespace {

const PhotonLabel kRUp{Polarization::R, Direction::Up};
const PhotonLabel kRDown{Polarization::R, Direction::Down};
const PhotonLabel kLUp{Polarization::L, Direction::Up};
const PhotonLabel kLDown{Polarization::L, Direction::Down};

RegisterLayout two_spins() {
    return RegisterLayout({SubsystemKind::Spin, SubsystemKind::Spin});
}

QuantumState bell_psi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return QuantumState(two_spins(), {s, 0.0, 0.0, s});
}

}  // namespace

TEST_CASE("photon labels: index order, s_z, flip") {
    CHECK(kRUp.index() == 0);
    CHECK(kRDown.index() == 1);
    CHECK(kLUp.index() == 2);
    CHECK(kLDown.index() == 3);

    CHECK(kRUp.s_z() == 1);
    CHECK(kRDown.s_z() == -1);
    CHECK(kLUp.s_z() == -1);
    CHECK(kLDown.s_z() == 1);

    for (int i = 0; i < 4; ++i) {
        const PhotonLabel label = PhotonLabel::from_index(i);
        CHECK(label.index() == i);
        CHECK(label.flipped().index() == 3 - i);
        CHECK(label.flipped().s_z() == label.s_z());
        CHECK(label.flipped().flipped() == label);
    }
    CHECK_THROWS_AS(PhotonLabel::from_index(4), std::invalid_argument);
    CHECK_THROWS_AS(PhotonLabel::from_index(-1), std::invalid_argument);
}

TEST_CASE("register layout: dims and big-endian strides") {
    const RegisterLayout layout(
        {SubsystemKind::Photon, SubsystemKind::Spin, SubsystemKind::Spin});
    CHECK(layout.size() == 3);
    CHECK(layout.total_dim() == 16);
    CHECK(layout.dim(0) == 4);
    CHECK(layout.dim(1) == 2);
    CHECK(layout.dim(2) == 2);
    CHECK(layout.stride(0) == 4);
    CHECK(layout.stride(1) == 2);
    CHECK(layout.stride(2) == 1);

    CHECK(subsystem_dim(SubsystemKind::Photon) == 4);
    CHECK(subsystem_dim(SubsystemKind::Spin) == 2);
}

TEST_CASE("basis states: encoding, decoding, validation") {
    const RegisterLayout layout(
        {SubsystemKind::Photon, SubsystemKind::Spin, SubsystemKind::Spin});
    const QuantumState state = make_basis_state(layout, {kRDown, Spin::Up, Spin::Down});

    // index = 1*4 + 0*2 + 1
    CHECK(state.amplitude(5) == Complex(1.0, 0.0));
    CHECK(state.norm() == Approx(1.0));

    const std::vector<BasisLabel> labels = decode_basis_state(state);
    REQUIRE(labels.size() == 3);
    CHECK(std::get<PhotonLabel>(labels[0]) == kRDown);
    CHECK(std::get<Spin>(labels[1]) == Spin::Up);
    CHECK(std::get<Spin>(labels[2]) == Spin::Down);

    // A global phase is not a different basis state.
    std::vector<Complex> amps(16);
    amps[5] = Complex(0.0, 1.0);
    const std::vector<BasisLabel> phased = decode_basis_state(QuantumState(layout, amps));
    CHECK(std::get<PhotonLabel>(phased[0]) == kRDown);

    CHECK_THROWS_AS(decode_basis_state(bell_psi_plus()), std::invalid_argument);
    CHECK_THROWS_AS(make_basis_state(layout, {kRDown, Spin::Up}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis_state(layout, {Spin::Up, Spin::Up, Spin::Down}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QuantumState(layout, std::vector<Complex>(8)), std::invalid_argument);
}

TEST_CASE("apply_local_map: single-target gates") {
    const RegisterLayout layout = two_spins();
    Matrix x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;

    const QuantumState up_up = make_basis_state(layout, {Spin::Up, Spin::Up});
    const QuantumState flipped = apply_local_map(up_up, {1}, x);
    CHECK(testutil::max_amp_diff(flipped, make_basis_state(layout, {Spin::Up, Spin::Down})) <
          kStateTol);

    // Hadamard on the slow spin spreads amplitude over strides of 2.
    Matrix h(2);
    const double s = 1.0 / std::sqrt(2.0);
    h(0, 0) = s;
    h(0, 1) = s;
    h(1, 0) = s;
    h(1, 1) = -s;
    const QuantumState plus = apply_local_map(up_up, {0}, h);
    CHECK(plus.amplitude(0).real() == Approx(s));
    CHECK(plus.amplitude(2).real() == Approx(s));
    CHECK(std::abs(plus.amplitude(1)) == Approx(0.0));
    CHECK(std::abs(plus.amplitude(3)) == Approx(0.0));
}

TEST_CASE("apply_local_map: first target is the slow matrix index") {
    const RegisterLayout layout = two_spins();
    const Matrix gate = testutil::cnot_oracle();

    // Targets {0,1}: subsystem 0 controls.
    const QuantumState a = apply_local_map(make_basis_state(layout, {Spin::Down, Spin::Up}),
                                           {0, 1}, gate);
    CHECK(testutil::max_amp_diff(a, make_basis_state(layout, {Spin::Down, Spin::Down})) <
          kStateTol);

    // Targets {1,0}: subsystem 1 controls, subsystem 0 toggles.
    const QuantumState b = apply_local_map(make_basis_state(layout, {Spin::Up, Spin::Down}),
                                           {1, 0}, gate);
    CHECK(testutil::max_amp_diff(b, make_basis_state(layout, {Spin::Down, Spin::Down})) <
          kStateTol);

    CHECK_THROWS_AS(apply_local_map(a, {0, 0}, gate), std::invalid_argument);
    CHECK_THROWS_AS(apply_local_map(a, {0}, gate), std::invalid_argument);
    CHECK_THROWS_AS(apply_local_map(a, {2}, gate), std::invalid_argument);
}

TEST_CASE("apply_local_map: unitaries preserve norm, contractions shrink it") {
    const RegisterLayout layout(
        {SubsystemKind::Photon, SubsystemKind::Spin, SubsystemKind::Spin});
    std::mt19937_64 rng(31);

    for (int round = 0; round < 50; ++round) {
        const QuantumState state = testutil::random_state(layout, rng);
        const QuantumState after_photon =
            apply_local_map(state, {0}, testutil::random_unitary(4, rng));
        CHECK(after_photon.norm() == Approx(1.0).epsilon(1e-12));
        const QuantumState after_pair =
            apply_local_map(state, {1, 2}, testutil::random_unitary(4, rng));
        CHECK(after_pair.norm() == Approx(1.0).epsilon(1e-12));
    }

    Matrix damp(2);
    damp(0, 0) = 1.0;
    damp(1, 1) = 0.5;
    const double s = 1.0 / std::sqrt(2.0);
    const QuantumState superpos = QuantumState(two_spins(), {s, 0.0, s, 0.0});
    const QuantumState damped = apply_local_map(superpos, {0}, damp);
    CHECK(damped.norm_squared() == Approx(0.5 + 0.25 * 0.5));
}

TEST_CASE("measure_subsystem: computational outcomes on a Bell pair") {
    const std::vector<MeasurementBranch> branches =
        measure_subsystem(bell_psi_plus(), 0, MeasureBasis::Computational);
    REQUIRE(branches.size() == 2);

    for (const MeasurementBranch& branch : branches) {
        CHECK(branch.probability == Approx(0.5));
        CHECK(branch.state.norm() == Approx(1.0));
        const Spin spin = branch.outcome == 0 ? Spin::Up : Spin::Down;
        CHECK(fidelity(branch.state, make_basis_state(two_spins(), {spin, spin})) ==
              Approx(1.0));
    }
}

TEST_CASE("measure_subsystem: polarization groups directions") {
    const RegisterLayout layout({SubsystemKind::Photon});
    const double a = std::sqrt(1.0 / 3.0);
    const QuantumState state(layout, {a, a, a, 0.0});

    const std::vector<MeasurementBranch> branches =
        measure_subsystem(state, 0, MeasureBasis::Polarization);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].outcome == 0);  // R
    CHECK(branches[0].probability == Approx(2.0 / 3.0));
    CHECK(branches[1].outcome == 1);  // L
    CHECK(branches[1].probability == Approx(1.0 / 3.0));

    // R branch keeps both directions, renormalized.
    CHECK(std::abs(branches[0].state.amplitude(0)) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(branches[0].state.amplitude(1)) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(branches[0].state.amplitude(2)) == Approx(0.0));
    CHECK(std::abs(branches[1].state.amplitude(2)) == Approx(1.0));

    CHECK_THROWS_AS(measure_subsystem(bell_psi_plus(), 0, MeasureBasis::Polarization),
                    std::invalid_argument);
}

TEST_CASE("measure_subsystem: probabilities are absolute on sub-normalized states") {
    std::vector<Complex> amps(4);
    amps[0] = 0.3;
    amps[3] = 0.4;
    const QuantumState state(two_spins(), amps);
    REQUIRE(state.norm_squared() == Approx(0.25));

    const std::vector<MeasurementBranch> branches =
        measure_subsystem(state, 1, MeasureBasis::Computational);
    double total = 0.0;
    for (const MeasurementBranch& branch : branches) {
        total += branch.probability;
        CHECK(branch.state.norm() == Approx(1.0));
    }
    CHECK(total == Approx(0.25));
}

TEST_CASE("sample_subsystem: seeded, conditioned on detection") {
    std::mt19937_64 a(99), b(99);
    const QuantumState bell = bell_psi_plus();
    const MeasurementBranch first = sample_subsystem(bell, 0, MeasureBasis::Computational, a);
    const MeasurementBranch second = sample_subsystem(bell, 0, MeasureBasis::Computational, b);
    CHECK(first.outcome == second.outcome);
    CHECK(first.probability == second.probability);

    // Frequencies track the Born weights.
    std::mt19937_64 rng(7);
    const RegisterLayout one_spin({SubsystemKind::Spin});
    const double s = 1.0 / std::sqrt(2.0);
    const QuantumState plus(one_spin, {s, s});
    int ups = 0;
    for (int i = 0; i < 2000; ++i) {
        if (sample_subsystem(plus, 0, MeasureBasis::Computational, rng).outcome == 0) {
            ++ups;
        }
    }
    CHECK(ups > 800);
    CHECK(ups < 1200);

    // Sub-normalized input: outcomes are drawn conditioned on detection, so
    // a lone surviving component is drawn every time.
    std::vector<Complex> amps(4);
    amps[2] = 0.5;
    const QuantumState lossy(two_spins(), amps);
    for (int i = 0; i < 20; ++i) {
        const MeasurementBranch branch =
            sample_subsystem(lossy, 0, MeasureBasis::Computational, rng);
        CHECK(branch.outcome == 1);
        CHECK(branch.probability == Approx(0.25));
    }

    const QuantumState dead(two_spins(), std::vector<Complex>(4));
    CHECK_THROWS_AS(sample_subsystem(dead, 0, MeasureBasis::Computational, rng),
                    std::invalid_argument);
}

TEST_CASE("fidelity and inner product") {
    const QuantumState bell = bell_psi_plus();
    std::vector<Complex> rotated(4);
    const Complex phase(0.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
        rotated[i] = phase * bell.amplitude(i);
    }
    const QuantumState phased(two_spins(), rotated);

    CHECK(fidelity(bell, phased) == Approx(1.0));
    CHECK(fidelity(bell, make_basis_state(two_spins(), {Spin::Up, Spin::Down})) ==
          Approx(0.0));
    CHECK(fidelity(bell, make_basis_state(two_spins(), {Spin::Up, Spin::Up})) == Approx(0.5));

    // Normalized overlap: scaling either argument changes nothing.
    std::vector<Complex> half(4);
    for (std::size_t i = 0; i < 4; ++i) {
        half[i] = 0.5 * bell.amplitude(i);
    }
    CHECK(fidelity(QuantumState(two_spins(), half), bell) == Approx(1.0));

    const QuantumState up_up = make_basis_state(two_spins(), {Spin::Up, Spin::Up});
    const Complex ab = inner_product(up_up, bell);
    const Complex ba = inner_product(bell, up_up);
    CHECK(ab.real() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(ab == std::conj(ba));

    CHECK_THROWS_AS(fidelity(bell, QuantumState(two_spins(), std::vector<Complex>(4))),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        inner_product(bell, QuantumState(RegisterLayout({SubsystemKind::Spin}), {1.0, 0.0})),
        std::invalid_argument);
}

TEST_CASE("append and remove a subsystem") {
    const QuantumState bell = bell_psi_plus();
    const QuantumState with_photon = append_subsystem(bell, kRDown);

    REQUIRE(with_photon.layout().size() == 3);
    CHECK(with_photon.layout().kind(2) == SubsystemKind::Photon);
    CHECK(with_photon.dimension() == 16);
    // Photon is the fastest index: amplitudes live at spin_index*4 + 1.
    CHECK(with_photon.amplitude(0 * 4 + 1).real() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(with_photon.amplitude(3 * 4 + 1).real() == Approx(1.0 / std::sqrt(2.0)));

    const QuantumState back = remove_subsystem(with_photon, 2);
    CHECK(back.layout() == bell.layout());
    CHECK(testutil::max_amp_diff(back, bell) < kStateTol);

    // Entangled subsystems cannot be split off.
    CHECK_THROWS_AS(remove_subsystem(bell, 0), std::invalid_argument);
}

TEST_CASE("label rendering") {
    CHECK(to_string(Spin::Up) == "up");
    CHECK(to_string(Spin::Down) == "down");
    CHECK(to_string(Polarization::R) == "R");
    CHECK(to_string(Polarization::L) == "L");
    CHECK(to_string(kRUp) == "R^");
    CHECK(to_string(kRDown) == "Rv");
    CHECK(to_string(kLUp) == "L^");
    CHECK(to_string(kLDown) == "Lv");
    CHECK(to_string(BasisLabel{Spin::Down}) == "down");
    CHECK(to_string(BasisLabel{kLUp}) == "L^");
}
