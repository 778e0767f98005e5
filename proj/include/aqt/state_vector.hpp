#pragma once

// Dense state-vector engine over labeled qubits.
//
// Basis convention: label position 0 is the most significant bit of the
// amplitude index, so a ket written |q0 q1 ... q(n-1)> reads left to right.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aqt/errors.hpp"
#include "aqt/labels.hpp"
#include "aqt/random.hpp"

namespace aqt {

using Complex = std::complex<double>;

/// Tolerance for exact-algebra checks.
inline constexpr double kTolerance = 1e-12;
inline constexpr std::size_t kMaxQubits = 12;

struct QubitLabel {
    std::string name;

    QubitLabel() = default;
    QubitLabel(std::string n) : name(std::move(n)) {}
    QubitLabel(const char *n) : name(n) {}

    friend bool operator==(const QubitLabel &, const QubitLabel &) = default;
    friend auto operator<=>(const QubitLabel &, const QubitLabel &) = default;
};

inline std::ostream &operator<<(std::ostream &os, const QubitLabel &q) { return os << q.name; }

class StateVector {
  public:
    /// |0...0> over the given labels.
    static StateVector zeros(std::vector<QubitLabel> labels) {
        if (labels.empty()) {
            throw LabelError("register needs at least one qubit");
        }
        check_labels(labels);
        std::vector<Complex> amps(std::size_t{1} << labels.size(), Complex{0.0, 0.0});
        amps[0] = 1.0;
        return StateVector(std::move(labels), std::move(amps));
    }

    /// Wraps explicit amplitudes. Norm must be 1 within kTolerance.
    static StateVector from_amplitudes(std::vector<QubitLabel> labels, std::vector<Complex> amps) {
        check_labels(labels);
        if (amps.size() != (std::size_t{1} << labels.size())) {
            throw PreconditionError("amplitude count " + std::to_string(amps.size()) + " does not match " +
                                    std::to_string(labels.size()) + " qubits");
        }
        StateVector s(std::move(labels), std::move(amps));
        if (std::abs(s.norm_squared() - 1.0) > kTolerance) {
            throw PreconditionError("state is not normalized");
        }
        return s;
    }

    /// alpha|0> + beta|1> on one qubit, renormalized.
    static StateVector qubit(QubitLabel label, Complex alpha, Complex beta) {
        double n = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (n < kTolerance) {
            throw PreconditionError("zero qubit state");
        }
        return StateVector({std::move(label)}, {alpha / n, beta / n});
    }

    /// The empty (zero-qubit) state, amplitude 1. Only reachable by factoring.
    static StateVector scalar(Complex value = 1.0) { return StateVector({}, {value}); }

    std::size_t num_qubits() const { return labels_.size(); }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<QubitLabel> &labels() const { return labels_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> mutable_amplitudes() { return amps_; }
    Complex amplitude(std::size_t index) const { return amps_.at(index); }

    bool contains(const QubitLabel &q) const { return std::find(labels_.begin(), labels_.end(), q) != labels_.end(); }

    std::size_t position(const QubitLabel &q) const {
        auto it = std::find(labels_.begin(), labels_.end(), q);
        if (it == labels_.end()) {
            throw LabelError("unknown qubit label '" + q.name + "'");
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Bit mask of a label inside the amplitude index.
    std::size_t mask(const QubitLabel &q) const { return std::size_t{1} << (labels_.size() - 1 - position(q)); }

    double norm_squared() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    void rename(const QubitLabel &from, const QubitLabel &to) {
        auto p = position(from);
        if (contains(to)) {
            throw LabelError("label '" + to.name + "' already in register");
        }
        labels_[p] = to;
    }

  private:
    StateVector(std::vector<QubitLabel> labels, std::vector<Complex> amps)
        : labels_(std::move(labels)), amps_(std::move(amps)) {}

    static void check_labels(const std::vector<QubitLabel> &labels) {
        if (labels.size() > kMaxQubits) {
            throw PreconditionError("register exceeds " + std::to_string(kMaxQubits) + " qubits");
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) {
                    throw LabelError("duplicate qubit label '" + labels[i].name + "'");
                }
            }
        }
    }

    friend StateVector tensor(const StateVector &, const StateVector &);
    friend StateVector reorder(const StateVector &, const std::vector<QubitLabel> &);
    friend std::pair<StateVector, StateVector> factor_out(const StateVector &, const QubitLabel &);

    std::vector<QubitLabel> labels_;
    std::vector<Complex> amps_;
};

inline StateVector new_register(std::vector<QubitLabel> labels) { return StateVector::zeros(std::move(labels)); }

/// a (x) b; b's qubits are appended after a's.
inline StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<QubitLabel> labels = a.labels_;
    labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
    StateVector::check_labels(labels);
    std::vector<Complex> amps(a.dimension() * b.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        for (std::size_t j = 0; j < b.dimension(); ++j) {
            amps[i * b.dimension() + j] = a.amps_[i] * b.amps_[j];
        }
    }
    return StateVector(std::move(labels), std::move(amps));
}

/// Same state with qubits listed in `order` (a permutation of the labels).
inline StateVector reorder(const StateVector &s, const std::vector<QubitLabel> &order) {
    if (order.size() != s.num_qubits()) {
        throw LabelError("label sets differ");
    }
    std::vector<std::size_t> src_mask(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        src_mask[k] = s.mask(order[k]);
    }
    StateVector::check_labels(order);
    const std::size_t n = order.size();
    std::vector<Complex> amps(s.dimension());
    for (std::size_t j = 0; j < s.dimension(); ++j) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (j & (std::size_t{1} << (n - 1 - k))) {
                src |= src_mask[k];
            }
        }
        amps[j] = s.amps_[src];
    }
    return StateVector(order, std::move(amps));
}

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { Hadamard, PauliX, PauliZ, CNOT };

struct Gate {
    GateKind kind;
    QubitLabel target;
    std::optional<QubitLabel> control;

    static Gate h(QubitLabel q) { return {GateKind::Hadamard, std::move(q), std::nullopt}; }
    static Gate x(QubitLabel q) { return {GateKind::PauliX, std::move(q), std::nullopt}; }
    static Gate z(QubitLabel q) { return {GateKind::PauliZ, std::move(q), std::nullopt}; }
    static Gate cnot(QubitLabel control, QubitLabel target) {
        if (control == target) {
            throw PreconditionError("CNOT control and target must differ ('" + control.name + "')");
        }
        return {GateKind::CNOT, std::move(target), std::move(control)};
    }
};

inline void apply_gate_inplace(StateVector &s, const Gate &g) {
    const std::size_t t = s.mask(g.target);
    auto amps = s.mutable_amplitudes();
    switch (g.kind) {
        case GateKind::Hadamard: {
            const double r = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (!(i & t)) {
                    Complex a0 = amps[i], a1 = amps[i | t];
                    amps[i] = r * (a0 + a1);
                    amps[i | t] = r * (a0 - a1);
                }
            }
            break;
        }
        case GateKind::PauliX:
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (!(i & t)) {
                    std::swap(amps[i], amps[i | t]);
                }
            }
            break;
        case GateKind::PauliZ:
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (i & t) {
                    amps[i] = -amps[i];
                }
            }
            break;
        case GateKind::CNOT: {
            if (!g.control || *g.control == g.target) {
                throw PreconditionError("CNOT needs a distinct control");
            }
            const std::size_t c = s.mask(*g.control);
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if ((i & c) && !(i & t)) {
                    std::swap(amps[i], amps[i | t]);
                }
            }
            break;
        }
    }
}

inline StateVector apply_gate(StateVector s, const Gate &g) {
    apply_gate_inplace(s, g);
    return s;
}

inline StateVector apply_pauli(StateVector s, PauliOp op, const QubitLabel &target) {
    switch (op) {
        case PauliOp::I:
            (void)s.position(target);
            break;
        case PauliOp::Z: apply_gate_inplace(s, Gate::z(target)); break;
        case PauliOp::X: apply_gate_inplace(s, Gate::x(target)); break;
        case PauliOp::XZ:
            apply_gate_inplace(s, Gate::z(target));
            apply_gate_inplace(s, Gate::x(target));
            break;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Measurement

/// Probability that `target` reads `bit`, straight from the amplitudes.
inline double outcome_probability(const StateVector &s, const QubitLabel &target, int bit) {
    const std::size_t m = s.mask(target);
    double p = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        if (((i & m) != 0) == (bit != 0)) {
            p += std::norm(s.amplitude(i));
        }
    }
    return p;
}

/// Renormalized projection of `target` onto `bit`.
inline StateVector project(StateVector s, const QubitLabel &target, int bit) {
    const std::size_t m = s.mask(target);
    auto amps = s.mutable_amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i & m) != 0) != (bit != 0)) {
            amps[i] = 0.0;
        } else {
            p += std::norm(amps[i]);
        }
    }
    if (p < kTolerance) {
        throw MeasurementError("projection of '" + target.name + "' onto " + std::to_string(bit) +
                               " has vanishing norm");
    }
    const double inv = 1.0 / std::sqrt(p);
    for (auto &a : amps) {
        a *= inv;
    }
    return s;
}

struct Measurement {
    int bit;
    StateVector state;
};

/// Projective Z measurement. Consumes exactly one uniform draw.
template <UniformSource Rng>
Measurement measure_qubit(StateVector s, const QubitLabel &target, Rng &rng) {
    const double p0 = outcome_probability(s, target, 0);
    const int bit = rng.uniform() < p0 ? 0 : 1;
    return {bit, project(std::move(s), target, bit)};
}

// ---------------------------------------------------------------------------
// Comparison and bookkeeping

/// |<a|b>|^2 after aligning b's qubit order to a's.
inline double fidelity(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw LabelError("fidelity: label sets differ");
    }
    for (const auto &q : a.labels()) {
        if (!b.contains(q)) {
            throw LabelError("fidelity: label '" + q.name + "' missing from second state");
        }
    }
    const StateVector bb = reorder(b, a.labels());
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        overlap += std::conj(a.amplitude(i)) * bb.amplitude(i);
    }
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

inline StateVector relabel(StateVector s, const QubitLabel &from, const QubitLabel &to) {
    s.rename(from, to);
    return s;
}

/// Multiplies by a global phase so the first non-negligible amplitude is real positive.
inline StateVector normalize_phase(StateVector s) {
    auto amps = s.mutable_amplitudes();
    for (const auto &a : amps) {
        if (std::abs(a) > 1e-9) {
            const Complex phase = std::conj(a) / std::abs(a);
            for (auto &b : amps) {
                b *= phase;
            }
            break;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Density matrices

struct DensityMatrix {
    std::vector<QubitLabel> labels;
    Eigen::MatrixXcd entries;

    double trace() const { return entries.trace().real(); }

    double purity() const { return (entries * entries).trace().real(); }

    bool is_hermitian(double tol = kTolerance) const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }

    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

    /// <psi|rho|psi> for a pure state on the same labels.
    double expectation(const StateVector &psi) const {
        const StateVector aligned = reorder(psi, labels);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(aligned.dimension()));
        for (std::size_t i = 0; i < aligned.dimension(); ++i) {
            v(static_cast<Eigen::Index>(i)) = aligned.amplitude(i);
        }
        return std::clamp((v.adjoint() * entries * v)(0, 0).real(), 0.0, 1.0);
    }

    static DensityMatrix maximally_mixed(std::vector<QubitLabel> labels) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << labels.size());
        return {std::move(labels), Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)};
    }
};

/// (1/2) * sum |eigenvalues of (a - b)|.
inline double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.entries.rows() != b.entries.rows()) {
        throw LabelError("trace_distance: dimension mismatch");
    }
    const Eigen::MatrixXcd diff = a.entries - b.entries;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

namespace detail {

/// Amplitudes arranged as a (kept x environment) matrix.
inline Eigen::MatrixXcd split_amplitudes(const StateVector &s, const std::vector<QubitLabel> &keep) {
    std::vector<std::size_t> keep_masks;
    std::size_t keep_all = 0;
    for (const auto &q : keep) {
        keep_masks.push_back(s.mask(q));
        keep_all |= keep_masks.back();
    }
    if (std::popcount(keep_all) != static_cast<int>(keep.size())) {
        throw LabelError("duplicate label in kept set");
    }
    std::vector<std::size_t> env_masks;
    for (const auto &q : s.labels()) {
        if (!(keep_all & s.mask(q))) {
            env_masks.push_back(s.mask(q));
        }
    }
    const auto k = keep.size();
    const auto e = env_masks.size();
    Eigen::MatrixXcd m(Eigen::Index{1} << k, Eigen::Index{1} << e);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        std::size_t row = 0, col = 0;
        for (std::size_t b = 0; b < k; ++b) {
            if (i & keep_masks[b]) row |= std::size_t{1} << (k - 1 - b);
        }
        for (std::size_t b = 0; b < e; ++b) {
            if (i & env_masks[b]) col |= std::size_t{1} << (e - 1 - b);
        }
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s.amplitude(i);
    }
    return m;
}

}  // namespace detail

/// Partial trace over every qubit not in `keep`; rows follow `keep` order.
inline DensityMatrix reduced_density(const StateVector &s, const std::vector<QubitLabel> &keep) {
    if (keep.empty()) {
        throw LabelError("reduced_density: empty keep set");
    }
    const Eigen::MatrixXcd m = detail::split_amplitudes(s, keep);
    return {keep, m * m.adjoint()};
}

/// Splits off a qubit that is in a product state with the rest.
/// Returns (qubit state, remaining register). Throws if the qubit is entangled.
inline std::pair<StateVector, StateVector> factor_out(const StateVector &s, const QubitLabel &q) {
    const Eigen::MatrixXcd m = detail::split_amplitudes(s, {q});
    const Eigen::MatrixXcd rho = m * m.adjoint();
    if ((rho * rho).trace().real() < 1.0 - 1e-10) {
        throw PreconditionError("qubit '" + q.name + "' is entangled with the register");
    }
    Eigen::Index best = 0;
    m.colwise().squaredNorm().maxCoeff(&best);
    Eigen::VectorXcd v = m.col(best);
    v.normalize();
    const Eigen::RowVectorXcd rest = v.adjoint() * m;

    std::vector<QubitLabel> rest_labels;
    for (const auto &l : s.labels()) {
        if (l != q) rest_labels.push_back(l);
    }
    std::vector<Complex> rest_amps(rest.size());
    for (Eigen::Index i = 0; i < rest.size(); ++i) rest_amps[static_cast<std::size_t>(i)] = rest(i);
    return {StateVector({q}, {v(0), v(1)}), StateVector(std::move(rest_labels), std::move(rest_amps))};
}

/// Drops a qubit sitting in a definite computational state (a measured ancilla).
inline StateVector discard_qubit(const StateVector &s, const QubitLabel &q) {
    const double p1 = outcome_probability(s, q, 1);
    if (p1 > kTolerance && p1 < 1.0 - kTolerance) {
        throw PreconditionError("cannot discard '" + q.name + "': not in a computational basis state");
    }
    return factor_out(s, q).second;
}

/// First label of the form base, base1, base2, ... absent from `s`.
inline QubitLabel fresh_label(const StateVector &s, const std::string &base) {
    if (!s.contains(base)) return base;
    for (int i = 1;; ++i) {
        QubitLabel l(base + std::to_string(i));
        if (!s.contains(l)) return l;
    }
}

// ---------------------------------------------------------------------------
// Bell states

/// Puts (q1, q2), both in |0> and unentangled, into the named Bell state
/// with exact signs: H(q1), CNOT(q1,q2), then X(q2) for psi, Z(q1) for minus.
inline StateVector prepare_bell(StateVector s, const QubitLabel &q1, const QubitLabel &q2, BellLabel label) {
    if (q1 == q2) {
        throw PreconditionError("Bell pair needs two distinct qubits");
    }
    if (outcome_probability(s, q1, 1) > kTolerance || outcome_probability(s, q2, 1) > kTolerance) {
        throw PreconditionError("prepare_bell: qubits '" + q1.name + "', '" + q2.name + "' are not in |00>");
    }
    apply_gate_inplace(s, Gate::h(q1));
    apply_gate_inplace(s, Gate::cnot(q1, q2));
    if (label == BellLabel::PsiPlus || label == BellLabel::PsiMinus) {
        apply_gate_inplace(s, Gate::x(q2));
    }
    if (label == BellLabel::PsiMinus || label == BellLabel::PhiMinus) {
        apply_gate_inplace(s, Gate::z(q1));
    }
    return s;
}

/// Fresh two-qubit register holding the named Bell state.
inline StateVector bell_state(const QubitLabel &q1, const QubitLabel &q2, BellLabel label) {
    return prepare_bell(new_register({q1, q2}), q1, q2, label);
}

}  // namespace aqt
