#include "telehardy/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace telehardy {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SlotCollision: return "slot collision";
        case ErrorKind::SlotAbsent: return "slot absent";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::NotFinite: return "non-finite amplitude";
        case ErrorKind::NotNormalized: return "not normalized";
        case ErrorKind::NotHermitian: return "not hermitian";
        case ErrorKind::NotProjector: return "not a projector";
        case ErrorKind::NotFactorized: return "not identity outside acted-on slots";
        case ErrorKind::ZeroProbabilityBranch: return "zero-probability branch";
        case ErrorKind::NonCommuting: return "non-commuting observables";
        case ErrorKind::EmptyBranch: return "empty branch";
        case ErrorKind::MalformedTable: return "malformed table";
        case ErrorKind::Rationalization: return "rationalization failed";
        case ErrorKind::Parse: return "parse error";
    }
    return "unknown error";
}

std::string_view slot_name(Slot slot) {
    switch (slot) {
        case Slot::A: return "A";
        case Slot::One: return "1";
        case Slot::Two: return "2";
        case Slot::B: return "B";
    }
    return "?";
}

std::optional<Slot> parse_slot(std::string_view text) {
    if (text == "A") return Slot::A;
    if (text == "1") return Slot::One;
    if (text == "2") return Slot::Two;
    if (text == "B") return Slot::B;
    return std::nullopt;
}

std::string slot_list_name(const SlotList& slots) {
    std::string out;
    for (Slot s : slots) out += slot_name(s);
    return out;
}

const SlotList& canonical_slots() {
    static const SlotList order{Slot::A, Slot::One, Slot::Two, Slot::B};
    return order;
}

namespace {

void check_slots(const SlotList& slots) {
    // Zero slots is the scalar case (residual of expanding a pair over itself).
    if (slots.size() > 4) {
        throw Error(ErrorKind::DimensionMismatch, "at most 4 slots");
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
            if (slots[i] == slots[j]) {
                throw Error(ErrorKind::SlotCollision, "slot " + std::string(slot_name(slots[i])) + " repeated");
            }
        }
    }
}

void check_finite(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) {
            throw Error(ErrorKind::NotFinite, "amplitude " + std::to_string(i));
        }
    }
}

std::size_t slot_position(const SlotList& slots, Slot slot) {
    auto it = std::find(slots.begin(), slots.end(), slot);
    if (it == slots.end()) {
        throw Error(ErrorKind::SlotAbsent, "slot " + std::string(slot_name(slot)) + " not in " + slot_list_name(slots));
    }
    return static_cast<std::size_t>(it - slots.begin());
}

bool same_slot_set(const SlotList& a, const SlotList& b) {
    if (a.size() != b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](Slot s) { return std::find(b.begin(), b.end(), s) != b.end(); });
}

inline std::size_t bit_at(std::size_t index, std::size_t pos, std::size_t n) { return (index >> (n - 1 - pos)) & 1U; }

// Bits of `index` at `positions`, first position most significant.
std::size_t local_bits(std::size_t index, const std::vector<std::size_t>& positions, std::size_t n) {
    std::size_t out = 0;
    for (std::size_t p : positions) out = (out << 1) | bit_at(index, p, n);
    return out;
}

std::size_t rest_mask(const std::vector<std::size_t>& positions, std::size_t n) {
    std::size_t mask = (std::size_t{1} << n) - 1;
    for (std::size_t p : positions) mask &= ~(std::size_t{1} << (n - 1 - p));
    return mask;
}

}  // namespace

// ---------------------------------------------------------------------------

RawState::RawState(SlotList slots, CVector amps) : slots_(std::move(slots)), amps_(std::move(amps)) {
    check_slots(slots_);
    if (amps_.size() != (Eigen::Index{1} << slots_.size())) {
        throw Error(ErrorKind::DimensionMismatch, "amplitude count does not match 2^n_qubits");
    }
    check_finite(amps_);
}

StateVector RawState::normalized(double tol) const {
    const double n2 = squared_norm();
    if (n2 <= tol) throw Error(ErrorKind::ZeroProbabilityBranch, "cannot normalize a zero vector");
    return StateVector(slots_, amps_ / std::sqrt(n2), tol);
}

StateVector RawState::as_state(double tol) const { return StateVector(slots_, amps_, tol); }

StateVector::StateVector(SlotList slots, CVector amps, double tol) : slots_(std::move(slots)), amps_(std::move(amps)) {
    check_slots(slots_);
    if (amps_.size() != (Eigen::Index{1} << slots_.size())) {
        throw Error(ErrorKind::DimensionMismatch, "amplitude count does not match 2^n_qubits");
    }
    check_finite(amps_);
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol) {
        throw Error(ErrorKind::NotNormalized, "squared norm " + std::to_string(n2));
    }
}

StateVector StateVector::basis(SlotList slots, std::size_t index) {
    const auto dim = Eigen::Index{1} << slots.size();
    if (static_cast<Eigen::Index>(index) >= dim) throw Error(ErrorKind::DimensionMismatch, "basis index out of range");
    CVector v = CVector::Zero(dim);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(slots), std::move(v));
}

std::optional<std::size_t> StateVector::position(Slot slot) const {
    auto it = std::find(slots_.begin(), slots_.end(), slot);
    if (it == slots_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - slots_.begin());
}

StateVector ket_up(Slot slot) { return StateVector::basis({slot}, 0); }
StateVector ket_down(Slot slot) { return StateVector::basis({slot}, 1); }

StateVector ket_up_x(Slot slot) {
    CVector v(2);
    v << std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2;
    return StateVector({slot}, v);
}

StateVector ket_down_x(Slot slot) {
    CVector v(2);
    v << std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2;
    return StateVector({slot}, v);
}

StateVector ket_along(Slot slot, double theta, double phi) {
    CVector v(2);
    v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    return StateVector({slot}, v);
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, Amplitude(0, -1), Amplitude(0, 1), 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

RawState tensor(const RawState& a, const RawState& b) {
    SlotList slots = a.slots();
    for (Slot s : b.slots()) {
        if (std::find(slots.begin(), slots.end(), s) != slots.end()) {
            throw Error(ErrorKind::SlotCollision, "slot " + std::string(slot_name(s)) + " on both factors");
        }
        slots.push_back(s);
    }
    const auto& x = a.amplitudes();
    const auto& y = b.amplitudes();
    CVector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index j = 0; j < y.size(); ++j) out(i * y.size() + j) = x(i) * y(j);
    }
    return RawState(std::move(slots), std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    RawState r = tensor(a.raw(), b.raw());
    return StateVector(r.slots(), r.amplitudes());
}

RawState reorder(const RawState& s, const SlotList& order) {
    if (!same_slot_set(s.slots(), order)) {
        throw Error(ErrorKind::SlotAbsent, "cannot reorder " + slot_list_name(s.slots()) + " to " + slot_list_name(order));
    }
    const std::size_t n = order.size();
    std::vector<std::size_t> src_pos(n);
    for (std::size_t k = 0; k < n; ++k) src_pos[k] = slot_position(s.slots(), order[k]);
    CVector out(s.amplitudes().size());
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < n; ++k) src |= bit_at(idx, k, n) << (n - 1 - src_pos[k]);
        out(static_cast<Eigen::Index>(idx)) = s.amplitudes()(static_cast<Eigen::Index>(src));
    }
    return RawState(order, std::move(out));
}

StateVector reorder(const StateVector& s, const SlotList& order) {
    RawState r = reorder(s.raw(), order);
    return StateVector(r.slots(), r.amplitudes());
}

Amplitude inner(const RawState& a, const RawState& b) {
    if (a.slots() != b.slots()) throw Error(ErrorKind::DimensionMismatch, "inner product over different slot orders");
    return a.amplitudes().dot(b.amplitudes());
}

// ---------------------------------------------------------------------------

double hermiticity_defect(const CMatrix& m) { return max_abs_entry(m - m.adjoint()); }

double idempotence_defect(const CMatrix& m) { return max_abs_entry(m * m - m); }

double max_abs_entry(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

namespace {

CMatrix embed_matrix(const CMatrix& local, const SlotList& acts_on, const SlotList& slots) {
    const std::size_t n = slots.size();
    std::vector<std::size_t> pos;
    for (Slot s : acts_on) pos.push_back(slot_position(slots, s));
    if (local.rows() != (Eigen::Index{1} << acts_on.size()) || local.cols() != local.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "local operator size does not match acted-on slots");
    }
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mask = rest_mask(pos, n);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & mask) != (j & mask)) continue;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                local(static_cast<Eigen::Index>(local_bits(i, pos, n)), static_cast<Eigen::Index>(local_bits(j, pos, n)));
        }
    }
    return m;
}

}  // namespace

bool factors_on(const CMatrix& m, const SlotList& slots, const SlotList& acts_on, double tol) {
    const std::size_t n = slots.size();
    std::vector<std::size_t> pos;
    for (Slot s : acts_on) pos.push_back(slot_position(slots, s));
    // Read the local block off the rest = 0 corner, then re-embed and compare.
    const std::size_t ldim = std::size_t{1} << acts_on.size();
    CMatrix local(static_cast<Eigen::Index>(ldim), static_cast<Eigen::Index>(ldim));
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mask = rest_mask(pos, n);
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            if (j & mask) continue;
            local(static_cast<Eigen::Index>(local_bits(i, pos, n)), static_cast<Eigen::Index>(local_bits(j, pos, n))) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return max_abs_entry(m - embed_matrix(local, acts_on, slots)) <= tol;
}

ObservableOp::ObservableOp(std::string name, SlotList slots, SlotList acts_on, CMatrix matrix, bool projector,
                           double tol)
    : name_(std::move(name)),
      slots_(std::move(slots)),
      acts_on_(std::move(acts_on)),
      matrix_(std::move(matrix)),
      projector_(projector) {
    check_slots(slots_);
    if (!acts_on_.empty()) check_slots(acts_on_);
    for (Slot s : acts_on_) slot_position(slots_, s);
    const auto dim = Eigen::Index{1} << slots_.size();
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, name_ + ": matrix is not 2^n x 2^n");
    }
    for (Eigen::Index i = 0; i < matrix_.size(); ++i) {
        const Amplitude z = matrix_.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorKind::NotFinite, name_);
    }
    if (hermiticity_defect(matrix_) > tol) throw Error(ErrorKind::NotHermitian, name_);
    if (projector_ && idempotence_defect(matrix_) > tol) throw Error(ErrorKind::NotProjector, name_);
    if (!factors_on(matrix_, slots_, acts_on_, tol)) throw Error(ErrorKind::NotFactorized, name_);
}

ObservableOp ObservableOp::embed(std::string name, const CMatrix& local, const SlotList& acts_on,
                                 const SlotList& slots, bool projector, double tol) {
    check_slots(slots);
    check_slots(acts_on);
    return ObservableOp(std::move(name), slots, acts_on, embed_matrix(local, acts_on, slots), projector, tol);
}

ObservableOp ObservableOp::identity(const SlotList& slots) {
    check_slots(slots);
    const auto dim = Eigen::Index{1} << slots.size();
    return ObservableOp("I", slots, {}, CMatrix::Identity(dim, dim), true);
}

ObservableOp ObservableOp::projector_onto(std::string name, const StateVector& s, const SlotList& slots) {
    const CMatrix local = s.amplitudes() * s.amplitudes().adjoint();
    return embed(std::move(name), local, s.slots(), slots, true);
}

namespace {

void require_same_space(const ObservableOp& a, const ObservableOp& b) {
    if (a.slots() != b.slots()) {
        throw Error(ErrorKind::DimensionMismatch,
                    a.name() + " on " + slot_list_name(a.slots()) + " vs " + b.name() + " on " + slot_list_name(b.slots()));
    }
}

}  // namespace

ObservableOp product(const ObservableOp& a, const ObservableOp& b, double tol) {
    require_same_space(a, b);
    CMatrix m = a.matrix() * b.matrix();
    if (hermiticity_defect(m) > tol) {
        throw Error(ErrorKind::NonCommuting, "product " + a.name() + "*" + b.name() + " is not hermitian");
    }
    SlotList acts = a.acts_on();
    for (Slot s : b.acts_on()) {
        if (std::find(acts.begin(), acts.end(), s) == acts.end()) acts.push_back(s);
    }
    // Keep acts_on in the operator's own slot order.
    SlotList ordered;
    for (Slot s : a.slots()) {
        if (std::find(acts.begin(), acts.end(), s) != acts.end()) ordered.push_back(s);
    }
    const bool proj = idempotence_defect(m) <= tol;
    return ObservableOp(a.name() + "*" + b.name(), a.slots(), std::move(ordered), std::move(m), proj, tol);
}

ObservableOp complement(const ObservableOp& p) {
    if (!p.is_projector()) throw Error(ErrorKind::NotProjector, p.name());
    const auto dim = p.matrix().rows();
    return ObservableOp("(I-" + p.name() + ")", p.slots(), p.acts_on(), CMatrix::Identity(dim, dim) - p.matrix(), true);
}

RawState apply(const ObservableOp& op, const StateVector& s) {
    if (op.slots() != s.slots()) {
        throw Error(ErrorKind::DimensionMismatch,
                    op.name() + " on " + slot_list_name(op.slots()) + " applied to state on " + slot_list_name(s.slots()));
    }
    return RawState(s.slots(), op.matrix() * s.amplitudes());
}

BornResult born_probability(const ObservableOp& op, const StateVector& s) {
    if (!op.is_projector()) throw Error(ErrorKind::NotProjector, op.name());
    const RawState r = apply(op, s);
    const Amplitude v = s.amplitudes().dot(r.amplitudes());
    return {v.real(), std::abs(v.imag())};
}

double expectation(const ObservableOp& op, const StateVector& s) {
    const RawState r = apply(op, s);
    return s.amplitudes().dot(r.amplitudes()).real();
}

Collapse collapse(const ObservableOp& op, const StateVector& s, double tol) {
    const double p = born_probability(op, s).probability;
    if (p <= tol) {
        throw Error(ErrorKind::ZeroProbabilityBranch, "outcome 1 of " + op.name() + " has probability " + std::to_string(p));
    }
    const RawState r = apply(op, s);
    return {p, StateVector(r.slots(), r.amplitudes() / std::sqrt(r.squared_norm()))};
}

double commutator_norm(const ObservableOp& a, const ObservableOp& b) {
    require_same_space(a, b);
    return max_abs_entry(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

CMatrix reduced_density(const StateVector& s, Slot slot) {
    const auto pos = s.position(slot);
    if (!pos) throw Error(ErrorKind::SlotAbsent, "slot " + std::string(slot_name(slot)) + " not in " + slot_list_name(s.slots()));
    const std::size_t n = s.n_qubits();
    const std::size_t bit = std::size_t{1} << (n - 1 - *pos);
    CMatrix rho = CMatrix::Zero(2, 2);
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        if (idx & bit) continue;
        const Amplitude a0 = s.amplitude(idx);
        const Amplitude a1 = s.amplitude(idx | bit);
        rho(0, 0) += a0 * std::conj(a0);
        rho(0, 1) += a0 * std::conj(a1);
        rho(1, 0) += a1 * std::conj(a0);
        rho(1, 1) += a1 * std::conj(a1);
    }
    return rho;
}

double reduced_projector_fidelity(const StateVector& s, Slot slot, const StateVector& target) {
    if (target.n_qubits() != 1) throw Error(ErrorKind::DimensionMismatch, "target must be a one-qubit state");
    const CMatrix rho = reduced_density(s, slot);
    const CVector& t = target.amplitudes();
    return t.dot(rho * t).real();
}

}  // namespace telehardy
