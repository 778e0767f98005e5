#pragma once

// Self-check suite behind `aqt verify`: every structural property the
// engine promises, evaluated on seeded random data.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aqt/adversary.hpp"
#include "aqt/bell_algebra.hpp"
#include "aqt/protocol.hpp"
#include "aqt/reference.hpp"

namespace aqt {

struct InvariantResult {
    std::string name;
    bool passed;
    std::string detail;
};

namespace detail {

inline StateVector random_state(std::vector<QubitLabel> labels, RandomSource &rng) {
    const std::size_t dim = std::size_t{1} << labels.size();
    std::vector<Complex> amps(dim);
    double n = 0.0;
    for (auto &a : amps) {
        // Box-Muller pairs give a unitarily invariant direction.
        const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform(), u3 = 1.0 - rng.uniform(), u4 = rng.uniform();
        a = Complex{std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2),
                    std::sqrt(-2.0 * std::log(u3)) * std::cos(2 * std::numbers::pi * u4)};
        n += std::norm(a);
    }
    for (auto &a : amps) a /= std::sqrt(n);
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

inline std::vector<InputSpec> haar_inputs(std::size_t n) { return std::vector<InputSpec>(n, InputSpec::haar_random()); }

}  // namespace detail

inline std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed = 2024) {
    std::vector<InvariantResult> out;
    auto add = [&](std::string name, bool ok, std::string detail = {}) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    RandomSource rng(seed);
    const std::vector<QubitLabel> three = {"A", "B", "C"};

    // --- quantum-core -------------------------------------------------------
    {
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            StateVector s = detail::random_state(three, rng);
            for (int k = 0; k < 40; ++k) {
                const auto pick = [&] { return three[static_cast<std::size_t>(rng.uniform() * 3)]; };
                const double u = rng.uniform();
                if (u < 0.25) apply_gate_inplace(s, Gate::h(pick()));
                else if (u < 0.5) apply_gate_inplace(s, Gate::x(pick()));
                else if (u < 0.75) apply_gate_inplace(s, Gate::z(pick()));
                else {
                    QubitLabel c = pick(), t = pick();
                    if (c != t) apply_gate_inplace(s, Gate::cnot(c, t));
                }
            }
            worst = std::max(worst, std::abs(s.norm_squared() - 1.0));
        }
        add("core: unitarity (norm drift)", worst <= kTolerance, detail::fmt(worst));
    }
    {
        double worst = 1.0;
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector s = detail::random_state(three, rng);
            for (const Gate &g : {Gate::h("A"), Gate::x("B"), Gate::z("C"), Gate::cnot("A", "C")}) {
                worst = std::min(worst, fidelity(s, apply_gate(apply_gate(s, g), g)));
            }
        }
        add("core: H, X, Z, CNOT are involutions", worst >= 1.0 - kTolerance, detail::fmt(1.0 - worst));
    }
    {
        // H (x) H: psi+ -> phi-, phi- -> psi+, psi- -> -psi-, phi+ -> phi+ (raw signs)
        struct Case { BellLabel in, out; double sign; };
        bool ok = true;
        for (auto c : {Case{BellLabel::PsiPlus, BellLabel::PhiMinus, 1}, Case{BellLabel::PhiMinus, BellLabel::PsiPlus, 1},
                       Case{BellLabel::PsiMinus, BellLabel::PsiMinus, -1}, Case{BellLabel::PhiPlus, BellLabel::PhiPlus, 1}}) {
            StateVector s = apply_gate(apply_gate(bell_state("A", "B", c.in), Gate::h("A")), Gate::h("B"));
            const StateVector t = bell_state("A", "B", c.out);
            for (std::size_t i = 0; i < 4; ++i) ok &= std::abs(s.amplitude(i) - c.sign * t.amplitude(i)) <= kTolerance;
        }
        add("core: Hadamard pair action on Bell states", ok);
    }
    {
        bool ok = true;
        std::string zs;
        for (int trial = 0; trial < 3; ++trial) {
            const StateVector s = detail::random_state({"A", "B"}, rng);
            const double p1 = outcome_probability(s, "A", 1);
            const int n = 10000;
            int ones = 0;
            for (int k = 0; k < n; ++k) ones += measure_qubit(s, "A", rng).bit;
            const double sigma = std::sqrt(n * p1 * (1 - p1));
            const double z = sigma > 0 ? std::abs(ones - n * p1) / sigma : 0.0;
            ok &= z <= 5.0;
            zs += detail::fmt(z) + " ";
        }
        add("core: measurement frequencies within 5 sigma", ok, "z = " + zs);
    }
    {
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector s = detail::random_state({"A", "B", "C", "D"}, rng);
            for (const auto &keep : std::vector<std::vector<QubitLabel>>{{"A"}, {"B", "D"}, {"C", "A", "B"}}) {
                const DensityMatrix rho = reduced_density(s, keep);
                ok &= std::abs(rho.trace() - 1.0) <= kTolerance && rho.is_hermitian() &&
                      rho.eigenvalues().minCoeff() >= -kTolerance;
            }
        }
        add("core: reduced density is a trace-1 PSD matrix", ok);
    }

    // --- bell-algebra -------------------------------------------------------
    {
        double worst = 1.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto [a, b] = InputSpec::haar_amplitudes(rng.uniform(), rng.uniform());
            for (auto ch : kAllBellLabels) {
                for (const auto &br : bell_expand(ch)) {
                    StateVector bob = br.bob.state("B", a, b);
                    bob = apply_pauli(bob, correction_for(ch, br.result), "B");
                    worst = std::min(worst, fidelity(bob, StateVector::qubit("B", a, b)));
                }
            }
        }
        add("bell: correction table agrees with channel expansions", worst >= 1.0 - kTolerance, detail::fmt(1.0 - worst));
    }
    {
        double worst = 1.0;
        const auto [a, b] = InputSpec::haar_amplitudes(rng.uniform(), rng.uniform());
        for (auto ch : kAllBellLabels) {
            const StateVector s = tensor(bell_state("A", "B", ch), StateVector::qubit("C", a, b));
            for (const auto &br : bell_expand(ch)) {
                // <R|_AC applied to the composite leaves Bob's branch.
                const Eigen::MatrixXcd m = detail::split_amplitudes(s, {"A", "C"});
                const StateVector ref = bell_state("p", "q", br.result);
                Eigen::RowVectorXcd bra(4);
                for (Eigen::Index i = 0; i < 4; ++i) bra(i) = std::conj(ref.amplitude(static_cast<std::size_t>(i)));
                const Eigen::RowVectorXcd bob = bra * m;
                const auto [c0, c1] = br.bob.amplitudes(a, b);
                const double ov = std::norm(bob(0) * std::conj(c0) + bob(1) * std::conj(c1)) / 0.25;
                worst = std::min(worst, ov);
            }
        }
        add("bell: channel expansions match direct projection", worst >= 1.0 - kTolerance, detail::fmt(1.0 - worst));
    }
    {
        std::set<BellLabel> seen;
        for (int d = 0; d < 2; ++d)
            for (int e = 0; e < 2; ++e) seen.insert(syndrome_to_bell(d, e));
        bool inverse = true;
        for (auto b : kAllBellLabels) {
            auto [d, e] = bell_to_syndrome(b);
            inverse &= syndrome_to_bell(d, e) == b;
        }
        add("bell: syndrome map is a bijection", seen.size() == 4 && inverse);
    }
    {
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector s = detail::random_state(three, rng);
            auto first = qnd_bell_measure(s, "A", "C", rng);
            const double p = bell_probabilities(first.state, "A", "C")[static_cast<std::size_t>(first.label)];
            auto second = qnd_bell_measure(first.state, "A", "C", rng);
            ok &= second.label == first.label && std::abs(p - 1.0) <= kTolerance &&
                  fidelity(first.state, second.state) >= 1.0 - kTolerance;
        }
        add("bell: QND measurement is idempotent", ok);
    }
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto [a, b] = InputSpec::haar_amplitudes(rng.uniform(), rng.uniform());
            for (auto ch : kAllBellLabels) {
                for (double p : pair_label_distribution(ch, a, b)) worst = std::max(worst, std::abs(p - 0.25));
            }
        }
        add("bell: syndrome probabilities are exactly 1/4", worst <= kTolerance, detail::fmt(worst));
    }
    {
        bool ok = true;
        for (auto m : kAllMessages) {
            StateVector s = apply_pauli(bell_state("MA", "MB", kMessageChannel), encode_superdense(m), "MA");
            ok &= decode_superdense(s, "MA", "MB", rng).message == m;
        }
        add("bell: superdense roundtrip", ok);
    }
    {
        double worst = 1.0;
        for (auto from : kAllBellLabels)
            for (auto to : kAllBellLabels) {
                const StateVector s = apply_pauli(bell_state("A", "C", from), restore_op(from, to), "A");
                worst = std::min(worst, fidelity(s, bell_state("A", "C", to)));
            }
        add("bell: restore operators reach every target", worst >= 1.0 - kTolerance, detail::fmt(1.0 - worst));
    }

    // --- protocol-engine ----------------------------------------------------
    const auto inputs = detail::haar_inputs(100);
    {
        double worst = 1.0;
        bool qnd_agrees = true;
        for (auto ch : kAllBellLabels)
            for (auto ap : {Approach::RestoreChannel, Approach::TrackChannel}) {
                const auto ex = run_single_channel_aqt(inputs, ap, ch, SeededSources{seed + static_cast<unsigned>(ch)});
                for (const auto &r : ex.runs) {
                    worst = std::min(worst, r.fidelity);
                    qnd_agrees &= r.bob_result == r.alice_result;
                }
            }
        add("protocol: perfect single-channel teleportation", worst >= 1.0 - kTolerance, detail::fmt(1.0 - worst));
        add("protocol: Bob's QND result equals Alice's", qnd_agrees);
    }
    {
        const auto restore = run_single_channel_aqt(inputs, Approach::RestoreChannel, BellLabel::PsiMinus, SeededSources{seed});
        const auto track = run_single_channel_aqt(inputs, Approach::TrackChannel, BellLabel::PsiMinus, SeededSources{seed});
        const auto op = run_op_experiment(inputs, BellLabel::PsiMinus, SeededSources{seed});
        const auto dual = run_two_channel_experiment(inputs, BellLabel::PsiMinus, SeededSources{seed});
        const std::uint64_t n = inputs.size();
        bool ok = restore.ledger.epr_pairs_created == 1 && restore.ledger.classical_bits_transmitted == 0 &&
                  track.ledger.epr_pairs_created == 1 && track.ledger.classical_bits_transmitted == 0 &&
                  op.ledger.epr_pairs_created == n && op.ledger.classical_bits_transmitted == 2 * n &&
                  dual.ledger.classical_bits_transmitted == 0 && dual.ledger.qubits_transmitted == n;
        add("protocol: resource ledger claims", ok);

        bool same = true;
        for (std::size_t i = 0; i < n; ++i) {
            same &= std::abs(restore.runs[i].fidelity - track.runs[i].fidelity) <= kTolerance;
        }
        add("protocol: restore and track approaches give identical fidelities", same);

        double agree = 1.0;
        std::string failure;
        for (const auto &summary :
             {reference::replay_single_channel(restore, BellLabel::PsiMinus),
              reference::replay_single_channel(track, BellLabel::PsiMinus), reference::replay_op(op),
              reference::replay_two_channel(dual)}) {
            agree = std::min(agree, summary.min_fidelity);
            if (failure.empty()) failure = summary.failure;
        }
        add("protocol: step engine matches brute-force evolution", agree >= 1.0 - kTolerance && failure.empty(),
            failure.empty() ? detail::fmt(1.0 - agree) : failure);
    }

    // --- adversary ----------------------------------------------------------
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto [a1, b1] = InputSpec::haar_amplitudes(rng.uniform(), rng.uniform());
            const auto [a2, b2] = InputSpec::haar_amplitudes(rng.uniform(), rng.uniform());
            for (auto ch : kAllBellLabels) {
                worst = std::max(worst,
                                 total_variation(pair_label_distribution(ch, a1, b1), pair_label_distribution(ch, a2, b2)));
            }
        }
        add("adversary: Eve's pair statistics independent of input", worst <= kTolerance, detail::fmt(worst));
    }
    {
        const auto some = detail::haar_inputs(20);
        double worst = 0.0;
        for (auto ap : {Approach::RestoreChannel, Approach::TrackChannel}) {
            const auto quiet = run_single_channel_aqt(some, ap, BellLabel::PsiMinus, SeededSources{seed});
            const auto eve = run_single_channel_aqt(some, ap, BellLabel::PsiMinus, SeededSources{seed}, EveMode::Pair);
            for (std::size_t i = 0; i < some.size(); ++i) {
                worst = std::max(worst, std::abs(quiet.runs[i].fidelity - eve.runs[i].fidelity));
                worst = std::max(worst, eve.runs[i].leakage->disturbance);
            }
        }
        add("adversary: pair interception does not disturb Bob", worst <= kTolerance, detail::fmt(worst));
    }
    {
        double worst = 0.0;
        for (auto m1 : kAllMessages) {
            worst = std::max(worst, trace_distance(message_qubit_density(m1), DensityMatrix::maximally_mixed({"MA"})));
            for (auto m2 : kAllMessages) {
                worst = std::max(worst, trace_distance(message_qubit_density(m1), message_qubit_density(m2)));
            }
        }
        add("adversary: message qubit carries no information", worst <= kTolerance, detail::fmt(worst));
    }
    return out;
}

}  // namespace aqt
