#pragma once

// Brute-force reference evolution. Every gate is expanded to a full
// 2^n x 2^n matrix by Kronecker products and applied to a density matrix,
// measurements are projector sandwiches, and discarded qubits are partial
// traces. Nothing here touches the in-place kernels of state_vector.hpp;
// it exists so the protocol drivers can be replayed independently.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aqt/bell_algebra.hpp"
#include "aqt/protocol_types.hpp"

namespace aqt::reference {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat pauli_x() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat pauli_z() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }
inline Mat hadamard() { return (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0); }
inline Mat proj(int bit) { return bit ? (Mat(2, 2) << 0, 0, 0, 1).finished() : (Mat(2, 2) << 1, 0, 0, 0).finished(); }

inline Mat pauli(PauliOp op) {
    switch (op) {
        case PauliOp::I: return Mat::Identity(2, 2);
        case PauliOp::Z: return pauli_z();
        case PauliOp::X: return pauli_x();
        case PauliOp::XZ: return pauli_x() * pauli_z();
    }
    return Mat::Identity(2, 2);
}

/// Density matrix over named qubits; position 0 is the most significant factor.
class Register {
  public:
    explicit Register(std::vector<std::string> names, const Vec &psi) : names_(std::move(names)), rho_(psi * psi.adjoint()) {}

    const std::vector<std::string> &names() const { return names_; }
    const Mat &rho() const { return rho_; }

    std::size_t pos(const std::string &q) const {
        auto it = std::find(names_.begin(), names_.end(), q);
        if (it == names_.end()) throw LabelError("reference: unknown qubit " + q);
        return static_cast<std::size_t>(it - names_.begin());
    }

    /// Full-size operator acting as `u` on qubit q.
    Mat lift(const Mat &u, const std::string &q) const {
        Mat out = Mat::Identity(1, 1);
        for (std::size_t k = 0; k < names_.size(); ++k) {
            out = kron(out, k == pos(q) ? u : Mat::Identity(2, 2));
        }
        return out;
    }

    void apply(const Mat &full) { rho_ = full * rho_ * full.adjoint(); }
    void apply1(const Mat &u, const std::string &q) { apply(lift(u, q)); }

    /// |0><0|_c (x) 1 + |1><1|_c (x) X_t
    void cnot(const std::string &c, const std::string &t) {
        apply(lift(proj(0), c) + lift(proj(1), c) * lift(pauli_x(), t));
    }

    void append_zero(const std::string &q) {
        Mat zero = proj(0);
        rho_ = kron(rho_, zero);
        names_.push_back(q);
    }

    /// Projects q onto `bit`; returns the probability and renormalizes.
    double project(const std::string &q, int bit) {
        const Mat p = lift(proj(bit), q);
        rho_ = p * rho_ * p;
        const double prob = rho_.trace().real();
        if (prob > 0.0) rho_ /= prob;
        return prob;
    }

    /// Partial trace over q.
    void trace_out(const std::string &q) {
        const std::size_t k = pos(q);
        const Eigen::Index hi = Eigen::Index{1} << k;
        const Eigen::Index lo = Eigen::Index{1} << (names_.size() - 1 - k);
        Mat out = Mat::Zero(hi * lo, hi * lo);
        for (Eigen::Index a = 0; a < hi; ++a)
            for (Eigen::Index b = 0; b < lo; ++b)
                for (Eigen::Index c = 0; c < hi; ++c)
                    for (Eigen::Index d = 0; d < lo; ++d)
                        for (Eigen::Index bit = 0; bit < 2; ++bit)
                            out(a * lo + b, c * lo + d) += rho_((a * 2 + bit) * lo + b, (c * 2 + bit) * lo + d);
        rho_ = out;
        names_.erase(names_.begin() + static_cast<std::ptrdiff_t>(k));
    }

    /// <psi|rho|psi> for an engine state over the same names.
    double overlap(const StateVector &psi) const {
        std::vector<QubitLabel> order(names_.begin(), names_.end());
        const StateVector aligned = reorder(psi, order);
        Vec v(static_cast<Eigen::Index>(aligned.dimension()));
        for (std::size_t i = 0; i < aligned.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = aligned.amplitude(i);
        return (v.adjoint() * rho_ * v)(0, 0).real();
    }

    /// Dominant eigenvector; rho is assumed pure.
    Vec principal() const {
        Eigen::SelfAdjointEigenSolver<Mat> solver(rho_);
        return solver.eigenvectors().col(solver.eigenvectors().cols() - 1);
    }

  private:
    std::vector<std::string> names_;
    Mat rho_;
};

/// Bell states written out from their definitions.
inline Vec bell(BellLabel b) {
    const double r = 1.0 / std::sqrt(2.0);
    Vec v = Vec::Zero(4);
    switch (b) {
        case BellLabel::PsiPlus: v(1) = r; v(2) = r; break;
        case BellLabel::PsiMinus: v(1) = r; v(2) = -r; break;
        case BellLabel::PhiPlus: v(0) = r; v(3) = r; break;
        case BellLabel::PhiMinus: v(0) = r; v(3) = -r; break;
    }
    return v;
}

inline Vec qubit(Complex a, Complex b) { return (Vec(2) << a, b).finished(); }

/// Ancilla-based QND Bell measurement, projected onto a known syndrome.
/// Returns the probability of that syndrome.
inline double qnd_project(Register &reg, const std::string &q1, const std::string &q2, int d, int e) {
    reg.append_zero("D");
    reg.append_zero("E");
    reg.cnot(q1, "D");
    reg.cnot(q2, "D");
    reg.apply1(hadamard(), q1);
    reg.apply1(hadamard(), q2);
    reg.cnot(q1, "E");
    reg.cnot(q2, "E");
    reg.apply1(hadamard(), q1);
    reg.apply1(hadamard(), q2);
    double p = reg.project("D", d);
    p *= reg.project("E", e);
    reg.trace_out("D");
    reg.trace_out("E");
    return p;
}

struct ReplaySummary {
    double min_fidelity = 1.0;  // worst engine-vs-reference agreement
    std::size_t runs = 0;
    std::string failure;        // first structural mismatch, if any
};

/// Replays a single-channel experiment, carrying the reference pair across runs.
inline ReplaySummary replay_single_channel(const Experiment &ex, BellLabel initial_channel) {
    ReplaySummary out;
    Vec channel = bell(initial_channel);
    for (std::size_t i = 0; i < ex.runs.size(); ++i) {
        const RunReport &r = ex.runs[i];
        Register reg({"A", "B", "C"}, kron(channel, qubit(r.alpha, r.beta)));
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].before));

        const double p_alice = qnd_project(reg, "A", "C", r.alice_syndrome.first, r.alice_syndrome.second);
        if (p_alice <= 1e-12 && out.failure.empty()) out.failure = "run " + std::to_string(i) + ": impossible syndrome";
        const auto [bd, be] = bell_to_syndrome(r.bob_result.value_or(r.alice_result));
        const double p_bob = qnd_project(reg, "A", "C", bd, be);
        if (std::abs(p_bob - 1.0) > 1e-12 && out.failure.empty()) {
            out.failure = "run " + std::to_string(i) + ": Bob's syndrome not deterministic";
        }
        reg.apply1(pauli(r.correction), "B");
        if (r.restore) reg.apply1(pauli(*r.restore), "A");
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].after));

        reg.trace_out("B");
        channel = reg.principal();
        ++out.runs;
    }
    return out;
}

/// Replays baseline runs; each ends with Bob's qubit alone.
inline ReplaySummary replay_op(const Experiment &ex) {
    ReplaySummary out;
    for (std::size_t i = 0; i < ex.runs.size(); ++i) {
        const RunReport &r = ex.runs[i];
        Register reg({"A", "B", "C"}, kron(bell(r.channel_before), qubit(r.alpha, r.beta)));
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].before));
        qnd_project(reg, "A", "C", r.alice_syndrome.first, r.alice_syndrome.second);
        reg.trace_out("A");
        reg.trace_out("C");
        reg.apply1(pauli(r.correction), "B");
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].after));
        ++out.runs;
    }
    return out;
}

/// Replays two-channel runs including encode, decode and (when aborted) loss
/// of the message qubit.
inline ReplaySummary replay_two_channel(const Experiment &ex) {
    ReplaySummary out;
    for (std::size_t i = 0; i < ex.runs.size(); ++i) {
        const RunReport &r = ex.runs[i];
        Vec psi = kron(kron(bell(r.channel_before), bell(kMessageChannel)), qubit(r.alpha, r.beta));
        Register reg({"A", "B", "MA", "MB", "C"}, psi);
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].before));
        qnd_project(reg, "A", "C", r.alice_syndrome.first, r.alice_syndrome.second);
        reg.trace_out("A");
        reg.trace_out("C");
        reg.apply1(pauli(encode_superdense(*r.message)), "MA");
        if (r.aborted) {
            out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].after));
            ++out.runs;
            continue;
        }
        reg.cnot("MA", "MB");
        reg.apply1(hadamard(), "MA");
        const TwoBitMessage got = message_for_label(*r.bob_result);
        const double p = reg.project("MA", got.hi) * reg.project("MB", got.lo);
        if (std::abs(p - 1.0) > 1e-12 && out.failure.empty()) {
            out.failure = "run " + std::to_string(i) + ": message decode not deterministic";
        }
        reg.trace_out("MA");
        reg.trace_out("MB");
        reg.apply1(pauli(r.correction), "B");
        out.min_fidelity = std::min(out.min_fidelity, reg.overlap(ex.traces[i].after));
        ++out.runs;
    }
    return out;
}

}  // namespace aqt::reference
