#pragma once

// Eavesdropper models: QND interception of the (A, C) pair in flight, and
// capture of the superdense message qubit.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "aqt/bell_algebra.hpp"
#include "aqt/protocol_types.hpp"

namespace aqt {

struct PairInterception {
    BellLabel observed;
    StateVector state;
};

/// Eve runs her own QND Bell measurement on the in-flight pair and forwards
/// both qubits.
template <UniformSource Rng>
PairInterception eve_intercept_pair(StateVector s, const Custody &custody, const QubitLabel &qa,
                                    const QubitLabel &qc, Rng &rng) {
    if (!custody.in_flight(qa) || !custody.in_flight(qc)) {
        throw PreconditionError("Eve can only intercept qubits in flight");
    }
    auto m = qnd_bell_measure(std::move(s), qa, qc, rng);
    return {m.label, std::move(m.state)};
}

/// Eve keeps the in-flight message qubit; returns what she holds.
inline DensityMatrix eve_intercept_message_qubit(const StateVector &s, Custody &custody, const QubitLabel &qm) {
    custody.seize(qm, Party::Eve);
    return reduced_density(s, {qm});
}

// ---------------------------------------------------------------------------
// Leakage metrics

inline double total_variation(const std::array<double, 4> &p, const std::array<double, 4> &q) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

/// Distribution of the Bell label anyone measuring (A, C) sees, for channel
/// on (A, B) and input alpha|0> + beta|1> on C. Computed from amplitudes.
inline std::array<double, 4> pair_label_distribution(BellLabel channel, Complex alpha, Complex beta) {
    const StateVector s = tensor(bell_state("A", "B", channel), StateVector::qubit("C", alpha, beta));
    return bell_probabilities(s, "A", "C");
}

/// Fixed probe inputs the observed input is compared against.
inline std::array<std::pair<Complex, Complex>, 4> reference_inputs() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{{1.0, 0.0}, {0.0, 1.0}, {r, r}, {r, Complex{0.0, r}}}};
}

/// Largest total-variation distance between Eve's label distribution for
/// this input and for any reference input.
inline double pair_distinguishability(BellLabel channel, Complex alpha, Complex beta) {
    const auto p = pair_label_distribution(channel, alpha, beta);
    double worst = 0.0;
    for (const auto &[a, b] : reference_inputs()) {
        worst = std::max(worst, total_variation(p, pair_label_distribution(channel, a, b)));
    }
    return worst;
}

/// Reduced state of Alice's message qubit after encoding `msg` on phi+.
inline DensityMatrix message_qubit_density(TwoBitMessage msg) {
    const StateVector s = apply_pauli(bell_state("MA", "MB", kMessageChannel), encode_superdense(msg), "MA");
    return reduced_density(s, {"MA"});
}

/// Largest trace distance between what Eve holds and any message-conditioned state.
inline double message_distinguishability(const DensityMatrix &intercepted) {
    double worst = 0.0;
    for (auto m : kAllMessages) {
        worst = std::max(worst, trace_distance(intercepted, message_qubit_density(m)));
    }
    return worst;
}

}  // namespace aqt
