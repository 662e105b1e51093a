#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "telehardy/errors.hpp"

namespace telehardy {

/// Default comparison tolerance for every floating-point check in the library.
inline constexpr double kTolerance = 1e-12;

using Amplitude = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Qubit slots of the four-particle system. Canonical tensor order is A, 1, 2, B.
enum class Slot : std::uint8_t { A, One, Two, B };

using SlotList = std::vector<Slot>;

std::string_view slot_name(Slot slot);
std::optional<Slot> parse_slot(std::string_view text);
std::string slot_list_name(const SlotList& slots);
const SlotList& canonical_slots();

// Basis convention for every slot: |+> (spin up) is index 0, |-> is index 1.
// Multi-qubit indices are row-major with the first listed slot as the most
// significant bit.

class StateVector;

/// Possibly unnormalized vector over labeled slots (projection residues etc).
class RawState {
public:
    RawState(SlotList slots, CVector amps);

    const SlotList& slots() const { return slots_; }
    const CVector& amplitudes() const { return amps_; }
    std::size_t n_qubits() const { return slots_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    double squared_norm() const { return amps_.squaredNorm(); }

    /// Rescale to unit norm. Throws ZeroProbabilityBranch for a (near) zero vector.
    StateVector normalized(double tol = kTolerance) const;

    /// Reinterpret as a state; requires |norm^2 - 1| <= tol.
    StateVector as_state(double tol = kTolerance) const;

private:
    SlotList slots_;
    CVector amps_;
};

/// Normalized pure state over 1..4 distinct slots.
class StateVector {
public:
    StateVector(SlotList slots, CVector amps, double tol = kTolerance);

    static StateVector basis(SlotList slots, std::size_t index);

    const SlotList& slots() const { return slots_; }
    const CVector& amplitudes() const { return amps_; }
    Amplitude amplitude(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
    std::size_t n_qubits() const { return slots_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

    /// Position of `slot` in the tensor order, or nullopt.
    std::optional<std::size_t> position(Slot slot) const;
    bool has_slot(Slot slot) const { return position(slot).has_value(); }

    RawState raw() const { return RawState(slots_, amps_); }

private:
    SlotList slots_;
    CVector amps_;
};

// Single-qubit states on a given slot.
StateVector ket_up(Slot slot);
StateVector ket_down(Slot slot);
StateVector ket_up_x(Slot slot);    // (|+> + |->)/sqrt2
StateVector ket_down_x(Slot slot);  // (|+> - |->)/sqrt2
/// Spin up along the direction (theta, phi) on the Bloch sphere.
StateVector ket_along(Slot slot, double theta, double phi);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// Kronecker product; the slot lists are concatenated. Slots must be disjoint.
StateVector tensor(const StateVector& a, const StateVector& b);
RawState tensor(const RawState& a, const RawState& b);

/// Permute qubits so the slots follow `order` (same slot set).
RawState reorder(const RawState& s, const SlotList& order);
StateVector reorder(const StateVector& s, const SlotList& order);

/// Conjugate-linear inner product <a|b>; both must be on the same slot order.
Amplitude inner(const RawState& a, const RawState& b);

/// Hermitian operator on a labeled slot set, acting nontrivially only on `acts_on`.
class ObservableOp {
public:
    /// Validates Hermiticity, finiteness, the tensor-factor structure and,
    /// when `projector` is set, idempotence.
    ObservableOp(std::string name, SlotList slots, SlotList acts_on, CMatrix matrix,
                 bool projector, double tol = kTolerance);

    /// Embed `local` (acting on `acts_on`, in that order) into the space over
    /// `slots`, identity elsewhere.
    static ObservableOp embed(std::string name, const CMatrix& local, const SlotList& acts_on,
                              const SlotList& slots, bool projector, double tol = kTolerance);

    static ObservableOp identity(const SlotList& slots);

    /// Projector |s><s| embedded into `slots`.
    static ObservableOp projector_onto(std::string name, const StateVector& s, const SlotList& slots);

    const std::string& name() const { return name_; }
    const SlotList& slots() const { return slots_; }
    const SlotList& acts_on() const { return acts_on_; }
    const CMatrix& matrix() const { return matrix_; }
    bool is_projector() const { return projector_; }
    std::size_t n_qubits() const { return slots_.size(); }

private:
    std::string name_;
    SlotList slots_;
    SlotList acts_on_;
    CMatrix matrix_;
    bool projector_;
};

/// True when `m` (over `slots`) equals local ⊗ identity for the slots outside `acts_on`.
bool factors_on(const CMatrix& m, const SlotList& slots, const SlotList& acts_on,
                double tol = kTolerance);

/// max_ij |M_ij - conj(M_ji)|
double hermiticity_defect(const CMatrix& m);
/// max_ij |(M^2 - M)_ij|
double idempotence_defect(const CMatrix& m);
double max_abs_entry(const CMatrix& m);

/// Operator product a·b. The result is flagged a projector when it is one.
ObservableOp product(const ObservableOp& a, const ObservableOp& b, double tol = kTolerance);
/// I - P for a projector P.
ObservableOp complement(const ObservableOp& p);

RawState apply(const ObservableOp& op, const StateVector& s);

struct BornResult {
    double probability;
    double imaginary_residue;
};

/// <s|P|s> for a projector P.
BornResult born_probability(const ObservableOp& op, const StateVector& s);

/// Real part of <s|M|s> for any Hermitian observable.
double expectation(const ObservableOp& op, const StateVector& s);

struct Collapse {
    double probability;
    StateVector post_state;
};

/// Projective measurement outcome "1" of `op`. A branch whose probability is
/// at or below `tol` raises ZeroProbabilityBranch.
Collapse collapse(const ObservableOp& op, const StateVector& s, double tol = kTolerance);

double commutator_norm(const ObservableOp& a, const ObservableOp& b);

/// 2x2 reduced density matrix of one slot.
CMatrix reduced_density(const StateVector& s, Slot slot);

/// <target|rho_slot|target> where `target` is a one-qubit state.
double reduced_projector_fidelity(const StateVector& s, Slot slot, const StateVector& target);

}  // namespace telehardy
