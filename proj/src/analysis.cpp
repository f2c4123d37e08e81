#include "qdspin/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdspin::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Inclusive-endpoint slack for floating-point grids: lo + k*step may land a
// few ulp past hi.
constexpr double kGridTol = 1e-9;

}  // namespace

double fidelity_formula_x(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("analysis: fidelity_formula_x needs x >= 0");
    }
    const double x2 = x * x;
    const double x4 = x2 * x2;
    return (x4 + 16.0) / (x4 + 16.0 * x2 + 16.0);
}

double fidelity_formula_g(double y) {
    if (!(y >= 0.0)) {
        throw std::invalid_argument("analysis: fidelity_formula_g needs y >= 0");
    }
    const double y4 = y * y * y * y;
    return (200.0 * y4 + 1.0) / (200.0 * y4 + 3.0);
}

double balanced_coupling(double x) {
    if (!(x > 0.0) || !(x < 2.0)) {
        throw std::domain_error("analysis: balanced coupling exists only for "
                                "0 < kappa_s/kappa < 2");
    }
    return std::sqrt(1.0 / (10.0 * x) - x / 40.0);
}

double balanced_leakage(double y) {
    if (!(y > 0.0)) {
        throw std::domain_error("analysis: balanced leakage exists only for g/kappa > 0");
    }
    // 2*(sqrt(100 y^4 + 1) - 10 y^2), written without the cancellation.
    const double y2 = y * y;
    return 2.0 / (std::sqrt(100.0 * y2 * y2 + 1.0) + 10.0 * y2);
}

double dephasing_adjustment(double fidelity, double tau, double t2) {
    if (!(fidelity >= 0.0) || !(fidelity <= 1.0)) {
        throw std::invalid_argument("analysis: fidelity must lie in [0, 1]");
    }
    if (!(tau >= 0.0) || !(t2 > 0.0)) {
        throw std::invalid_argument("analysis: need tau >= 0 and t2 > 0");
    }
    return fidelity * std::exp(-tau / t2);
}

std::vector<QuantumState> ensemble_inputs(Ensemble ensemble) {
    const RegisterLayout layout({SubsystemKind::Spin, SubsystemKind::Spin});
    std::vector<QuantumState> inputs;
    if (ensemble == Ensemble::FourBasis || ensemble == Ensemble::Combined) {
        for (Spin control : {Spin::Up, Spin::Down}) {
            for (Spin target : {Spin::Up, Spin::Down}) {
                inputs.push_back(
                    make_basis_state(layout, {BasisLabel(control), BasisLabel(target)}));
            }
        }
    }
    if (ensemble == Ensemble::UniformSuperposition || ensemble == Ensemble::Combined) {
        for (Spin target : {Spin::Up, Spin::Down}) {
            const QuantumState basis =
                make_basis_state(layout, {BasisLabel(Spin::Up), BasisLabel(target)});
            inputs.push_back(protocol::hadamard_spin(basis, 0));
        }
    }
    return inputs;
}

namespace {

void check_point(const OperatingPoint& point) {
    if (!(point.kappa_s_over_kappa >= 0.0) || !(point.g_over_kappa >= 0.0) ||
        !(point.gamma_over_kappa > 0.0)) {
        throw std::invalid_argument("analysis: operating point needs kappa_s >= 0, "
                                    "g >= 0 and gamma > 0");
    }
}

}  // namespace

SimulationResult simulate_cnot_fidelity(const OperatingPoint& point,
                                        const SimulationOptions& options) {
    const std::vector<QuantumState> inputs = ensemble_inputs(options.ensemble);
    return simulate_cnot_fidelity(point, inputs, options);
}

SimulationResult simulate_cnot_fidelity(const OperatingPoint& point,
                                        std::span<const QuantumState> inputs,
                                        const SimulationOptions& options) {
    check_point(point);
    if (inputs.empty()) {
        throw std::invalid_argument("analysis: simulation needs at least one input state");
    }
    const cavity::ScatteringAmplitudes amps = cavity::resonant_amplitudes(
        point.kappa_s_over_kappa, point.gamma_over_kappa, point.g_over_kappa);
    const protocol::Mode mode =
        protocol::Mode::leaky(amps, options.convention, options.wrong_port_is_loss);
    const Matrix gate = protocol::cnot_matrix();

    double fidelity_sum = 0.0;
    double success_sum = 0.0;
    for (const QuantumState& input : inputs) {
        const QuantumState ideal = apply_local_map(input, {0, 1}, gate);
        double detected = 0.0;
        double weighted = 0.0;
        for (const protocol::CnotBranch& branch : protocol::cnot(input, 0, 1, mode)) {
            detected += branch.record.branch_probability;
            weighted +=
                branch.record.branch_probability * fidelity(branch.record.final_state, ideal);
        }
        fidelity_sum += detected > 0.0 ? weighted / detected : 0.0;
        success_sum += detected;
    }
    const double n = static_cast<double>(inputs.size());
    return SimulationResult{fidelity_sum / n, success_sum / n};
}

namespace {

SweepRow make_row(double swept, const SweepRequest& request) {
    SweepRow row{kNaN, kNaN, kNaN, kNaN, kNaN};
    double x = kNaN;
    double g = kNaN;
    if (request.axis == SweepAxis::KappaS) {
        row.x = swept;
        x = swept;
        if (swept >= 0.0) {
            row.f_formula = fidelity_formula_x(swept);
        }
        try {
            g = balanced_coupling(swept);
        } catch (const std::domain_error&) {
            return row;
        }
        row.g_over_kappa = g;
    } else {
        row.g_over_kappa = swept;
        g = swept;
        if (swept >= 0.0) {
            row.f_formula = fidelity_formula_g(swept);
        }
        try {
            x = balanced_leakage(swept);
        } catch (const std::domain_error&) {
            return row;
        }
        row.x = x;
    }
    OperatingPoint point{x, g, request.gamma_over_kappa};
    const SimulationResult result = simulate_cnot_fidelity(point, request.options);
    row.f_sim = result.fidelity;
    row.success_prob = result.success_probability;
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepRequest& request) {
    if (!(request.step > 0.0)) {
        throw std::invalid_argument("analysis: sweep step must be positive");
    }
    if (!(request.lo <= request.hi)) {
        throw std::invalid_argument("analysis: sweep range is empty");
    }
    if (!(request.gamma_over_kappa > 0.0)) {
        throw std::invalid_argument("analysis: gamma/kappa must be positive");
    }
    const std::size_t count =
        static_cast<std::size_t>(std::floor((request.hi - request.lo) / request.step + kGridTol)) +
        1;
    std::vector<SweepRow> rows;
    rows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        rows.push_back(make_row(request.lo + static_cast<double>(k) * request.step, request));
    }
    return rows;
}

}  // namespace qdspin::analysis
