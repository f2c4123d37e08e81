#include "qdspin/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdspin {

namespace {

constexpr double kZeroProb = 1e-30;

std::size_t checked_index(std::size_t i, std::size_t n, const char* what) {
    if (i >= n) {
        throw std::invalid_argument(std::string(what) + " index out of range");
    }
    return i;
}

}  // namespace

int PhotonLabel::index() const {
    return (pol == Polarization::L ? 2 : 0) + (dir == Direction::Down ? 1 : 0);
}

PhotonLabel PhotonLabel::from_index(int i) {
    if (i < 0 || i > 3) {
        throw std::invalid_argument("photon basis index out of range");
    }
    return {i < 2 ? Polarization::R : Polarization::L,
            i % 2 == 0 ? Direction::Up : Direction::Down};
}

int PhotonLabel::s_z() const {
    const bool plus = (pol == Polarization::R) == (dir == Direction::Up);
    return plus ? +1 : -1;
}

PhotonLabel PhotonLabel::flipped() const {
    return {pol == Polarization::R ? Polarization::L : Polarization::R,
            dir == Direction::Up ? Direction::Down : Direction::Up};
}

std::size_t subsystem_dim(SubsystemKind kind) {
    return kind == SubsystemKind::Photon ? 4 : 2;
}

RegisterLayout::RegisterLayout(std::vector<SubsystemKind> subsystems)
    : subsystems_(std::move(subsystems)) {
    for (auto kind : subsystems_) {
        total_dim_ *= subsystem_dim(kind);
    }
}

SubsystemKind RegisterLayout::kind(std::size_t i) const {
    return subsystems_[checked_index(i, subsystems_.size(), "subsystem")];
}

std::size_t RegisterLayout::stride(std::size_t i) const {
    checked_index(i, subsystems_.size(), "subsystem");
    std::size_t acc = 1;
    for (std::size_t j = subsystems_.size(); j-- > i + 1;) {
        acc *= dim(j);
    }
    return acc;
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
    Matrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t k = 0; k < a.dim(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < a.dim(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

QuantumState::QuantumState(RegisterLayout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.total_dim()) {
        throw std::invalid_argument("amplitude vector length does not match layout dimension");
    }
}

double QuantumState::norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

double QuantumState::norm() const { return std::sqrt(norm_squared()); }

namespace {

std::size_t label_index(SubsystemKind kind, const BasisLabel& label) {
    if (kind == SubsystemKind::Photon) {
        const auto* photon = std::get_if<PhotonLabel>(&label);
        if (photon == nullptr) {
            throw std::invalid_argument("spin label given for a photon subsystem");
        }
        return static_cast<std::size_t>(photon->index());
    }
    const auto* spin = std::get_if<Spin>(&label);
    if (spin == nullptr) {
        throw std::invalid_argument("photon label given for a spin subsystem");
    }
    return static_cast<std::size_t>(*spin);
}

}  // namespace

QuantumState make_basis_state(const RegisterLayout& layout, std::span<const BasisLabel> labels) {
    if (labels.size() != layout.size()) {
        throw std::invalid_argument("one basis label per subsystem required");
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        index += label_index(layout.kind(i), labels[i]) * layout.stride(i);
    }
    std::vector<Complex> amps(layout.total_dim());
    amps[index] = 1.0;
    return QuantumState(layout, std::move(amps));
}

QuantumState make_basis_state(const RegisterLayout& layout,
                              std::initializer_list<BasisLabel> labels) {
    return make_basis_state(layout, std::span<const BasisLabel>(labels.begin(), labels.size()));
}

std::vector<BasisLabel> decode_basis_state(const QuantumState& state) {
    const auto amps = state.amplitudes();
    std::size_t hit = amps.size();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::norm(amps[i]) > kStateTol) {
            if (hit != amps.size()) {
                throw std::invalid_argument("not a basis state: multiple amplitudes set");
            }
            hit = i;
        }
    }
    if (hit == amps.size() || std::abs(std::norm(amps[hit]) - 1.0) > 1e-9) {
        throw std::invalid_argument("not a unit basis state");
    }
    const auto& layout = state.layout();
    std::vector<BasisLabel> labels;
    labels.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const std::size_t digit = (hit / layout.stride(i)) % layout.dim(i);
        if (layout.kind(i) == SubsystemKind::Photon) {
            labels.emplace_back(PhotonLabel::from_index(static_cast<int>(digit)));
        } else {
            labels.emplace_back(static_cast<Spin>(digit));
        }
    }
    return labels;
}

QuantumState apply_local_map(const QuantumState& state, std::span<const std::size_t> targets,
                             const Matrix& matrix) {
    const auto& layout = state.layout();
    const std::size_t n = layout.size();
    std::vector<bool> used(n, false);
    std::size_t block = 1;
    for (std::size_t t : targets) {
        checked_index(t, n, "target");
        if (used[t]) {
            throw std::invalid_argument("repeated target index");
        }
        used[t] = true;
        block *= layout.dim(t);
    }
    if (matrix.dim() != block) {
        throw std::invalid_argument("matrix dimension does not match target subsystems");
    }

    // Offset of each matrix index within the full register; first target is
    // the slowest matrix digit.
    std::vector<std::size_t> block_offset(block, 0);
    {
        std::vector<std::size_t> tdim(targets.size()), tstride(targets.size());
        std::size_t acc = 1;
        for (std::size_t k = targets.size(); k-- > 0;) {
            tdim[k] = layout.dim(targets[k]);
            tstride[k] = acc;
            acc *= tdim[k];
        }
        for (std::size_t a = 0; a < block; ++a) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < targets.size(); ++k) {
                off += ((a / tstride[k]) % tdim[k]) * layout.stride(targets[k]);
            }
            block_offset[a] = off;
        }
    }

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i]) rest.push_back(i);
    }
    const std::size_t rest_count = layout.total_dim() / block;

    std::vector<Complex> out(state.dimension());
    std::vector<Complex> in_block(block);
    for (std::size_t r = 0; r < rest_count; ++r) {
        std::size_t base = 0;
        {
            std::size_t rem = r;
            for (std::size_t j = rest.size(); j-- > 0;) {
                const std::size_t d = layout.dim(rest[j]);
                base += (rem % d) * layout.stride(rest[j]);
                rem /= d;
            }
        }
        for (std::size_t a = 0; a < block; ++a) {
            in_block[a] = state.amplitude(base + block_offset[a]);
        }
        for (std::size_t i = 0; i < block; ++i) {
            Complex acc{};
            for (std::size_t j = 0; j < block; ++j) {
                acc += matrix(i, j) * in_block[j];
            }
            out[base + block_offset[i]] = acc;
        }
    }
    return QuantumState(layout, std::move(out));
}

QuantumState apply_local_map(const QuantumState& state, std::initializer_list<std::size_t> targets,
                             const Matrix& matrix) {
    return apply_local_map(state, std::span<const std::size_t>(targets.begin(), targets.size()),
                           matrix);
}

namespace {

struct OutcomeGroup {
    int outcome;
    std::vector<std::size_t> digits;
};

std::vector<OutcomeGroup> outcome_groups(const RegisterLayout& layout, std::size_t target,
                                         MeasureBasis basis) {
    const SubsystemKind kind = layout.kind(target);
    std::vector<OutcomeGroup> groups;
    if (basis == MeasureBasis::Polarization) {
        if (kind != SubsystemKind::Photon) {
            throw std::invalid_argument("polarization basis requires a photon subsystem");
        }
        groups.push_back({0, {0, 1}});  // R, both directions
        groups.push_back({1, {2, 3}});  // L
    } else {
        for (std::size_t d = 0; d < layout.dim(target); ++d) {
            groups.push_back({static_cast<int>(d), {d}});
        }
    }
    return groups;
}

}  // namespace

std::vector<MeasurementBranch> measure_subsystem(const QuantumState& state, std::size_t target,
                                                 MeasureBasis basis) {
    const auto& layout = state.layout();
    checked_index(target, layout.size(), "target");
    const std::size_t stride = layout.stride(target);
    const std::size_t dim = layout.dim(target);

    std::vector<MeasurementBranch> branches;
    for (const auto& group : outcome_groups(layout, target, basis)) {
        double p = 0.0;
        std::vector<Complex> amps(state.dimension());
        for (std::size_t i = 0; i < state.dimension(); ++i) {
            const std::size_t digit = (i / stride) % dim;
            if (std::find(group.digits.begin(), group.digits.end(), digit) != group.digits.end()) {
                amps[i] = state.amplitude(i);
                p += std::norm(amps[i]);
            }
        }
        if (p <= kZeroProb) continue;
        const double inv = 1.0 / std::sqrt(p);
        for (auto& a : amps) a *= inv;
        branches.push_back({group.outcome, p, QuantumState(layout, std::move(amps))});
    }
    return branches;
}

MeasurementBranch sample_subsystem(const QuantumState& state, std::size_t target,
                                   MeasureBasis basis, std::mt19937_64& rng) {
    auto branches = measure_subsystem(state, target, basis);
    if (branches.empty()) {
        throw std::invalid_argument("cannot sample a zero-norm state");
    }
    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    std::uniform_real_distribution<double> dist(0.0, total);
    double u = dist(rng);
    for (auto& b : branches) {
        if (u < b.probability || &b == &branches.back()) {
            return std::move(b);
        }
        u -= b.probability;
    }
    return std::move(branches.back());
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
    if (!(a.layout() == b.layout())) {
        throw std::invalid_argument("layout mismatch");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        acc += std::conj(a.amplitude(i)) * b.amplitude(i);
    }
    return acc;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    const Complex ov = inner_product(a, b);
    const double denom = a.norm_squared() * b.norm_squared();
    if (denom <= kZeroProb) {
        throw std::invalid_argument("fidelity of a zero-norm state");
    }
    return std::norm(ov) / denom;
}

QuantumState append_subsystem(const QuantumState& state, const BasisLabel& label) {
    const auto& layout = state.layout();
    std::vector<SubsystemKind> kinds;
    kinds.reserve(layout.size() + 1);
    for (std::size_t i = 0; i < layout.size(); ++i) kinds.push_back(layout.kind(i));
    const SubsystemKind kind =
        std::holds_alternative<PhotonLabel>(label) ? SubsystemKind::Photon : SubsystemKind::Spin;
    kinds.push_back(kind);
    RegisterLayout extended(std::move(kinds));

    const std::size_t d = subsystem_dim(kind);
    const std::size_t digit = label_index(kind, label);
    std::vector<Complex> amps(extended.total_dim());
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        amps[i * d + digit] = state.amplitude(i);
    }
    return QuantumState(std::move(extended), std::move(amps));
}

QuantumState remove_subsystem(const QuantumState& state, std::size_t target) {
    const auto& layout = state.layout();
    checked_index(target, layout.size(), "target");
    const std::size_t stride = layout.stride(target);
    const std::size_t dim = layout.dim(target);

    // The subsystem must hold a definite basis value; find it.
    std::vector<double> weight(dim, 0.0);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        weight[(i / stride) % dim] += std::norm(state.amplitude(i));
    }
    const std::size_t digit =
        std::distance(weight.begin(), std::max_element(weight.begin(), weight.end()));
    double off = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        if (d != digit) off += weight[d];
    }
    if (off > kStateTol) {
        throw std::invalid_argument("subsystem is not in a definite basis state");
    }

    std::vector<SubsystemKind> kinds;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (i != target) kinds.push_back(layout.kind(i));
    }
    RegisterLayout reduced(std::move(kinds));
    std::vector<Complex> amps(reduced.total_dim());
    std::size_t j = 0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if ((i / stride) % dim == digit) {
            amps[j++] = state.amplitude(i);
        }
    }
    return QuantumState(std::move(reduced), std::move(amps));
}

std::string to_string(Spin s) { return s == Spin::Up ? "up" : "down"; }

std::string to_string(Polarization p) { return p == Polarization::R ? "R" : "L"; }

std::string to_string(const PhotonLabel& label) {
    return to_string(label.pol) + (label.dir == Direction::Up ? "^" : "v");
}

std::string to_string(const BasisLabel& label) {
    if (const auto* photon = std::get_if<PhotonLabel>(&label)) {
        return to_string(*photon);
    }
    return to_string(std::get<Spin>(label));
}

}  // namespace qdspin
