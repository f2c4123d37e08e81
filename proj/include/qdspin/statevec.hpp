#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qdspin {

using Complex = std::complex<double>;

/// Tolerance used for state-equality and probability bookkeeping checks.
inline constexpr double kStateTol = 1e-12;

enum class Polarization { R, L };
enum class Direction { Up, Down };

/// Electron spin along the cavity axis: |+1/2> (Up) or |-1/2> (Down).
enum class Spin { Up = 0, Down = 1 };

/// Basis label of the photon subsystem: circular polarization plus
/// propagation direction along the cavity axis.
///
/// Index order is fixed: (R,up)=0, (R,down)=1, (L,up)=2, (L,down)=3.
struct PhotonLabel {
    Polarization pol = Polarization::R;
    Direction dir = Direction::Up;

    int index() const;
    static PhotonLabel from_index(int i);

    /// Photon spin angular momentum along the cavity axis:
    /// +1 for {R up, L down}, -1 for {R down, L up}.
    int s_z() const;

    /// Flips both polarization and direction (reflection off the cavity);
    /// preserves s_z.
    PhotonLabel flipped() const;

    bool operator==(const PhotonLabel&) const = default;
};

enum class SubsystemKind { Photon, Spin };

std::size_t subsystem_dim(SubsystemKind kind);  // Photon: 4, Spin: 2

using BasisLabel = std::variant<PhotonLabel, Spin>;

/// Ordered list of subsystems making up a register. Subsystem 0 is the
/// slowest-varying index (big-endian over the layout).
class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<SubsystemKind> subsystems);

    std::size_t size() const { return subsystems_.size(); }
    SubsystemKind kind(std::size_t i) const;
    std::size_t dim(std::size_t i) const { return subsystem_dim(kind(i)); }
    std::size_t total_dim() const { return total_dim_; }

    /// Amplitude-index stride of subsystem i (product of the dims after it).
    std::size_t stride(std::size_t i) const;

    bool operator==(const RegisterLayout&) const = default;

  private:
    std::vector<SubsystemKind> subsystems_;
    std::size_t total_dim_ = 1;
};

/// Dense complex square matrix, row-major.
class Matrix {
  public:
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    static Matrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    Matrix adjoint() const;
    friend Matrix operator*(const Matrix& a, const Matrix& b);

  private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// Immutable dense state vector over a register layout. The norm may be
/// below one: contraction maps (lossy scattering) are legal, and the missing
/// squared norm is the accumulated loss probability.
class QuantumState {
  public:
    QuantumState(RegisterLayout layout, std::vector<Complex> amplitudes);

    const RegisterLayout& layout() const { return layout_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const;
    double norm() const;

  private:
    RegisterLayout layout_;
    std::vector<Complex> amplitudes_;
};

/// Unit basis state with one label per subsystem.
QuantumState make_basis_state(const RegisterLayout& layout, std::span<const BasisLabel> labels);
QuantumState make_basis_state(const RegisterLayout& layout, std::initializer_list<BasisLabel> labels);

/// Decodes a computational basis state back into per-subsystem labels.
/// Throws if the state is not a basis state (up to global phase).
std::vector<BasisLabel> decode_basis_state(const QuantumState& state);

/// Applies `matrix` to the listed target subsystems (first target is the
/// slowest matrix index), identity elsewhere. The matrix need not be
/// unitary; contractions produce sub-normalized states.
QuantumState apply_local_map(const QuantumState& state, std::span<const std::size_t> targets,
                             const Matrix& matrix);
QuantumState apply_local_map(const QuantumState& state, std::initializer_list<std::size_t> targets,
                             const Matrix& matrix);

enum class MeasureBasis {
    Computational,  ///< one outcome per basis label of the target
    Polarization,   ///< photon only: R vs L, marginalized over direction
};

struct MeasurementBranch {
    /// Raw outcome index. Computational: the basis index of the target
    /// subsystem. Polarization: 0 = R, 1 = L.
    int outcome;
    /// Absolute probability; over all branches these sum to the squared
    /// norm of the input state (loss excluded).
    double probability;
    /// Collapsed state, renormalized to unit norm.
    QuantumState state;
};

/// Enumerates all outcomes with nonzero probability.
std::vector<MeasurementBranch> measure_subsystem(const QuantumState& state, std::size_t target,
                                                 MeasureBasis basis);

/// Draws one outcome, conditioned on detection when the input is
/// sub-normalized. The rng is the only source of randomness, so runs
/// with the same seed reproduce.
MeasurementBranch sample_subsystem(const QuantumState& state, std::size_t target,
                                   MeasureBasis basis, std::mt19937_64& rng);

/// Squared normalized overlap |<a|b>|^2 / (|a|^2 |b|^2). Symmetric.
double fidelity(const QuantumState& a, const QuantumState& b);

Complex inner_product(const QuantumState& a, const QuantumState& b);

/// Appends one subsystem, in the given basis state, at the end of the layout.
QuantumState append_subsystem(const QuantumState& state, const BasisLabel& label);

/// Removes a subsystem that is in a definite basis state (e.g. just
/// measured). Throws if the subsystem is still entangled with the rest.
QuantumState remove_subsystem(const QuantumState& state, std::size_t target);

std::string to_string(Spin s);
std::string to_string(Polarization p);
std::string to_string(const PhotonLabel& label);
std::string to_string(const BasisLabel& label);

}  // namespace qdspin
