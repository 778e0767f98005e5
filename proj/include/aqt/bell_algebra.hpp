#pragma once

// Bell-basis combinatorics: syndrome decoding for the ancilla-based QND
// circuit, teleportation correction tables, channel restoration and
// superdense coding.

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "aqt/labels.hpp"
#include "aqt/random.hpp"
#include "aqt/state_vector.hpp"

namespace aqt {

/// Ancilla outcomes (D, E) -> Bell label.
///   D is the parity of the pair, E the parity after H on both members.
inline constexpr BellLabel syndrome_to_bell(int d, int e) {
    if (d) {
        return e ? BellLabel::PsiMinus : BellLabel::PsiPlus;
    }
    return e ? BellLabel::PhiMinus : BellLabel::PhiPlus;
}

inline constexpr std::pair<int, int> bell_to_syndrome(BellLabel b) {
    switch (b) {
        case BellLabel::PsiPlus: return {1, 0};
        case BellLabel::PsiMinus: return {1, 1};
        case BellLabel::PhiPlus: return {0, 0};
        case BellLabel::PhiMinus: return {0, 1};
    }
    return {0, 0};
}

namespace detail {

inline constexpr std::size_t index(BellLabel b) { return static_cast<std::size_t>(b); }

// Rows: channel. Columns: Alice's result. Both in serialization order
// (psi+, psi-, phi+, phi-).
inline constexpr std::array<std::array<PauliOp, 4>, 4> kCorrections = {{
    // channel psi+
    {PauliOp::I, PauliOp::Z, PauliOp::X, PauliOp::XZ},
    // channel psi-
    {PauliOp::Z, PauliOp::I, PauliOp::XZ, PauliOp::X},
    // channel phi+
    {PauliOp::X, PauliOp::XZ, PauliOp::I, PauliOp::Z},
    // channel phi-
    {PauliOp::XZ, PauliOp::X, PauliOp::Z, PauliOp::I},
}};

// Pauli frame of each Bell state relative to phi+, acting on the first
// member: |B> ~ (P (x) 1)|phi+>. Encoded as (x << 1) | z.
inline constexpr unsigned frame(BellLabel b) {
    switch (b) {
        case BellLabel::PhiPlus: return 0b00;
        case BellLabel::PhiMinus: return 0b01;
        case BellLabel::PsiPlus: return 0b10;
        case BellLabel::PsiMinus: return 0b11;
    }
    return 0;
}

inline constexpr PauliOp pauli_from_frame(unsigned f) {
    switch (f & 0b11) {
        case 0b00: return PauliOp::I;
        case 0b01: return PauliOp::Z;
        case 0b10: return PauliOp::X;
        default: return PauliOp::XZ;
    }
}

}  // namespace detail

/// The Pauli Bob applies to his channel qubit once he knows Alice's result.
inline constexpr PauliOp correction_for(BellLabel channel, BellLabel result) {
    return detail::kCorrections[detail::index(channel)][detail::index(result)];
}

/// Operator on the first pair member taking |measured> to |target> up to phase.
inline constexpr PauliOp restore_op(BellLabel measured, BellLabel target) {
    return detail::pauli_from_frame(detail::frame(measured) ^ detail::frame(target));
}

// ---------------------------------------------------------------------------
// Channel expansions

/// Bob's unnormalized branch state, sign * (a_sign*alpha|s> + b_sign*beta|1-s>),
/// with s = 1 when `flipped`.
struct BobState {
    int sign = 1;
    bool flipped = false;
    int alpha_sign = 1;
    int beta_sign = 1;

    /// (amplitude of |0>, amplitude of |1>) including the branch sign.
    std::pair<Complex, Complex> amplitudes(Complex alpha, Complex beta) const {
        const Complex a = static_cast<double>(sign * alpha_sign) * alpha;
        const Complex b = static_cast<double>(sign * beta_sign) * beta;
        return flipped ? std::pair{b, a} : std::pair{a, b};
    }

    StateVector state(const QubitLabel &q, Complex alpha, Complex beta) const {
        auto [c0, c1] = amplitudes(alpha, beta);
        return StateVector::qubit(q, c0, c1);
    }

    std::string describe() const {
        auto term = [](int s, const char *coef, int ket, bool first) {
            std::string out = s < 0 ? "-" : (first ? "" : "+");
            return out + coef + "|" + std::to_string(ket) + ">";
        };
        std::string body = term(alpha_sign, "a", flipped ? 1 : 0, true) + term(beta_sign, "b", flipped ? 0 : 1, false);
        return sign < 0 ? "-(" + body + ")" : body;
    }

    friend bool operator==(const BobState &, const BobState &) = default;
};

struct ExpansionBranch {
    BellLabel result;
    BobState bob;
};

/// |channel>_AB |chi>_C = (1/2) sum_R |R>_AC (x) bob_R, for the four results R
/// in serialization order.
inline std::array<ExpansionBranch, 4> bell_expand(BellLabel channel) {
    using B = BellLabel;
    switch (channel) {
        case B::PsiMinus:
            return {{{B::PsiPlus, {+1, false, +1, -1}},
                     {B::PsiMinus, {+1, false, +1, +1}},
                     {B::PhiPlus, {+1, true, -1, +1}},
                     {B::PhiMinus, {-1, true, +1, +1}}}};
        case B::PsiPlus:
            return {{{B::PsiPlus, {+1, false, +1, +1}},
                     {B::PsiMinus, {-1, false, +1, -1}},
                     {B::PhiPlus, {+1, true, +1, +1}},
                     {B::PhiMinus, {+1, true, +1, -1}}}};
        case B::PhiMinus:
            return {{{B::PsiPlus, {+1, true, -1, +1}},
                     {B::PsiMinus, {-1, true, +1, +1}},
                     {B::PhiPlus, {+1, false, +1, -1}},
                     {B::PhiMinus, {+1, false, +1, +1}}}};
        case B::PhiPlus:
            return {{{B::PsiPlus, {+1, true, +1, +1}},
                     {B::PsiMinus, {-1, true, +1, -1}},
                     {B::PhiPlus, {+1, false, +1, +1}},
                     {B::PhiMinus, {+1, false, +1, -1}}}};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Bell measurements

/// Analytic probability of each Bell outcome on (q1, q2), serialization order.
inline std::array<double, 4> bell_probabilities(const StateVector &s, const QubitLabel &q1, const QubitLabel &q2) {
    const Eigen::MatrixXcd m = detail::split_amplitudes(s, {q1, q2});
    std::array<double, 4> out{};
    for (auto b : kAllBellLabels) {
        const StateVector ref = bell_state("p", "q", b);
        Eigen::RowVectorXcd bra(4);
        for (Eigen::Index i = 0; i < 4; ++i) bra(i) = std::conj(ref.amplitude(static_cast<std::size_t>(i)));
        out[detail::index(b)] = (bra * m).squaredNorm();
    }
    return out;
}

/// Syndrome-extraction circuit without measurement: ancilla d collects the
/// Z-parity of (q1, q2), ancilla e the X-parity. The trailing Hadamards undo
/// the basis change so the pair is returned untouched.
inline StateVector apply_qnd_circuit(StateVector s, const QubitLabel &q1, const QubitLabel &q2, const QubitLabel &d,
                                     const QubitLabel &e) {
    for (const Gate &g : {Gate::cnot(q1, d), Gate::cnot(q2, d), Gate::h(q1), Gate::h(q2), Gate::cnot(q1, e),
                          Gate::cnot(q2, e), Gate::h(q1), Gate::h(q2)}) {
        apply_gate_inplace(s, g);
    }
    return s;
}

struct BellMeasurement {
    BellLabel label;
    int d;
    int e;
    StateVector state;
};

/// Joint QND Bell measurement on (q1, q2) through two fresh ancillas.
/// The ancillas are measured (D then E) and removed; the pair survives in
/// the reported Bell state. Consumes two uniform draws.
template <UniformSource Rng>
BellMeasurement qnd_bell_measure(StateVector s, const QubitLabel &q1, const QubitLabel &q2, Rng &rng) {
    if (q1 == q2) {
        throw PreconditionError("Bell measurement needs two distinct qubits");
    }
    (void)s.position(q1);
    (void)s.position(q2);
    const QubitLabel d = fresh_label(s, "D");
    s = tensor(s, new_register({d}));
    const QubitLabel e = fresh_label(s, "E");
    s = tensor(s, new_register({e}));

    s = apply_qnd_circuit(std::move(s), q1, q2, d, e);
    auto md = measure_qubit(std::move(s), d, rng);
    auto me = measure_qubit(std::move(md.state), e, rng);
    StateVector out = discard_qubit(discard_qubit(me.state, d), e);
    return {syndrome_to_bell(md.bit, me.bit), md.bit, me.bit, std::move(out)};
}

/// Bell measurement that consumes the pair: QND circuit, then both members
/// are measured in the computational basis and removed. Four uniform draws.
template <UniformSource Rng>
BellMeasurement bell_measure_destructive(StateVector s, const QubitLabel &q1, const QubitLabel &q2, Rng &rng) {
    auto qnd = qnd_bell_measure(std::move(s), q1, q2, rng);
    auto m1 = measure_qubit(std::move(qnd.state), q1, rng);
    auto m2 = measure_qubit(std::move(m1.state), q2, rng);
    return {qnd.label, qnd.d, qnd.e, discard_qubit(discard_qubit(m2.state, q1), q2)};
}

// ---------------------------------------------------------------------------
// Superdense coding over a phi+ message channel

inline constexpr BellLabel kMessageChannel = BellLabel::PhiPlus;

/// Operator Alice applies to her half of phi+ to send `msg`.
/// 00 -> I, 01 -> X, 10 -> Z, 11 -> XZ (the inverse of the decoder below).
inline constexpr PauliOp encode_superdense(TwoBitMessage msg) {
    return detail::pauli_from_frame(static_cast<unsigned>(msg.lo) << 1 | static_cast<unsigned>(msg.hi));
}

struct DecodeResult {
    TwoBitMessage message;
    StateVector state;
};

/// CNOT(qa -> qb), H(qa), then measure qa, qb. Bits are (qa, qb):
/// phi+ -> 00, psi+ -> 01, phi- -> 10, psi- -> 11. Both qubits are removed.
template <UniformSource Rng>
DecodeResult decode_superdense(StateVector s, const QubitLabel &qa, const QubitLabel &qb, Rng &rng) {
    apply_gate_inplace(s, Gate::cnot(qa, qb));
    apply_gate_inplace(s, Gate::h(qa));
    auto ma = measure_qubit(std::move(s), qa, rng);
    auto mb = measure_qubit(std::move(ma.state), qb, rng);
    return {{ma.bit != 0, mb.bit != 0}, discard_qubit(discard_qubit(mb.state, qa), qb)};
}

/// Result label <-> two bits, by serialization order (psi+ = 00 ... phi- = 11).
inline constexpr TwoBitMessage message_for_label(BellLabel b) {
    return TwoBitMessage::from_value(static_cast<unsigned>(b));
}

inline constexpr BellLabel label_for_message(TwoBitMessage m) { return static_cast<BellLabel>(m.value()); }

}  // namespace aqt
