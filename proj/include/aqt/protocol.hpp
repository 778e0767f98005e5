#pragma once

// Teleportation protocol drivers: the classical-channel baseline, single
// channel all-quantum teleportation (pair reused across runs) and the
// two-channel variant with a superdense-coded result.
//
// Qubit names: A (Alice's channel half), B (Bob's channel half), C (input),
// MA/MB (message channel halves). Charles is a preparation step, so handing
// C to Alice is not counted as a transmission.

#include <span>
#include <utility>
#include <vector>

#include "aqt/adversary.hpp"
#include "aqt/bell_algebra.hpp"
#include "aqt/protocol_types.hpp"

namespace aqt {

struct RunResult {
    RunReport report;
    RunTrace trace;
};

namespace detail {

inline double output_fidelity(const StateVector &s, const QubitLabel &q, Complex alpha, Complex beta) {
    return reduced_density(s, {q}).expectation(StateVector::qubit(q, alpha, beta));
}

}  // namespace detail

/// One run of the classical-channel protocol on a freshly created pair.
template <UniformSource Rng>
RunResult run_op_baseline(const InputSpec &input, BellLabel channel, Rng &rng, std::size_t run_index = 0) {
    Ledger ledger;
    Custody custody;
    RunReport r;
    r.run_index = run_index;
    r.variant = Variant::OP;
    r.channel_before = channel;
    std::tie(r.alpha, r.beta) = input.resolve(rng);

    StateVector s = bell_state("A", "B", channel);
    ledger.epr_pairs_created += 1;
    custody.assign("A", Party::Alice);
    custody.assign("B", Party::Bob);

    s = tensor(s, StateVector::qubit("C", r.alpha, r.beta));
    custody.assign("C", Party::Alice);
    StateVector before = s;

    custody.require_held(Party::Alice, {"A", "C"});
    auto m = bell_measure_destructive(std::move(s), "A", "C", rng);
    s = std::move(m.state);
    custody.release("A");
    custody.release("C");
    r.alice_result = m.label;
    r.alice_syndrome = {m.d, m.e};
    ledger.classical_bits_transmitted += 2;

    custody.require_held(Party::Bob, {"B"});
    r.correction = correction_for(channel, m.label);
    s = apply_pauli(std::move(s), r.correction, "B");
    r.fidelity = detail::output_fidelity(s, "B", r.alpha, r.beta);
    r.ledger_delta = ledger;
    return {std::move(r), {std::move(before), std::move(s)}};
}

/// Independent baseline runs, one new pair each.
template <SourceFactory Sources>
Experiment run_op_experiment(std::span<const InputSpec> inputs, BellLabel channel, Sources &&sources) {
    Experiment ex;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto rng = sources(i, 0);
        auto res = run_op_baseline(inputs[i], channel, rng, i);
        ex.ledger.epr_pairs_created += res.report.ledger_delta.epr_pairs_created;
        ex.ledger.qubits_transmitted += res.report.ledger_delta.qubits_transmitted;
        ex.ledger.classical_bits_transmitted += res.report.ledger_delta.classical_bits_transmitted;
        ex.runs.push_back(std::move(res.report));
        ex.traces.push_back(std::move(res.trace));
    }
    return ex;
}

/// Single-channel teleportation of every input over one shared pair.
///
/// Per run: Alice QND-measures (A, C) and ships both qubits to Bob, who
/// repeats the QND measurement, corrects B, then either rotates the pair back
/// to `initial_channel` (RestoreChannel) or leaves it as measured
/// (TrackChannel). Bob keeps C as his new B and returns A. With
/// EveMode::Pair, Eve QND-measures the pair while it is in flight.
template <SourceFactory Sources>
Experiment run_single_channel_aqt(std::span<const InputSpec> inputs, Approach approach, BellLabel initial_channel,
                                  Sources &&sources, EveMode eve = EveMode::None) {
    if (inputs.empty()) {
        throw PreconditionError("single-channel teleportation needs at least one input");
    }
    if (eve == EveMode::Qubit) {
        throw PreconditionError("message-qubit interception needs the two-channel variant");
    }
    Experiment ex;
    Custody custody;
    StateVector s = bell_state("A", "B", initial_channel);
    ex.ledger.epr_pairs_created += 1;
    custody.assign("A", Party::Alice);
    custody.assign("B", Party::Bob);
    BellLabel channel = initial_channel;

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Ledger start = ex.ledger;
        auto rng = sources(i, 0);
        RunReport r;
        r.run_index = i;
        r.variant = approach == Approach::RestoreChannel ? Variant::SingleChannelRestore : Variant::SingleChannelTrack;
        r.channel_before = channel;
        std::tie(r.alpha, r.beta) = inputs[i].resolve(rng);

        s = tensor(s, StateVector::qubit("C", r.alpha, r.beta));
        custody.assign("C", Party::Alice);
        StateVector before = s;

        custody.require_held(Party::Alice, {"A", "C"});
        auto alice = qnd_bell_measure(std::move(s), "A", "C", rng);
        s = std::move(alice.state);
        r.alice_result = alice.label;
        r.alice_syndrome = {alice.d, alice.e};

        custody.send({"A", "C"}, Party::Alice, Party::Bob, ex.ledger);
        if (eve == EveMode::Pair) {
            auto eve_rng = sources(i, 1);
            auto seen = eve_intercept_pair(std::move(s), custody, "A", "C", eve_rng);
            s = std::move(seen.state);
            r.leakage = LeakageReport{seen.observed, 0.0, pair_distinguishability(channel, r.alpha, r.beta)};
        }
        custody.deliver({"A", "C"});

        custody.require_held(Party::Bob, {"A", "B", "C"});
        auto bob = qnd_bell_measure(std::move(s), "A", "C", rng);
        s = std::move(bob.state);
        r.bob_result = bob.label;
        r.correction = correction_for(channel, bob.label);
        s = apply_pauli(std::move(s), r.correction, "B");
        r.fidelity = detail::output_fidelity(s, "B", r.alpha, r.beta);
        if (r.leakage) {
            r.leakage->disturbance = 1.0 - r.fidelity;
        }

        if (approach == Approach::RestoreChannel) {
            r.restore = restore_op(bob.label, initial_channel);
            s = apply_pauli(std::move(s), *r.restore, "A");
            channel = initial_channel;
        } else {
            channel = bob.label;
        }
        r.channel_after = channel;
        RunTrace trace{std::move(before), s};

        // B now carries the teleported state and leaves the register.
        s = factor_out(s, "B").second;
        custody.release("B");
        custody = custody_transfer(std::move(custody), {"A"}, Party::Bob, Party::Alice, ex.ledger);
        s = relabel(std::move(s), "C", "B");
        custody.rename("C", "B");

        r.ledger_delta = ex.ledger - start;
        if (i == 0) {
            r.ledger_delta.epr_pairs_created += 1;
        }
        ex.runs.push_back(std::move(r));
        ex.traces.push_back(std::move(trace));
    }
    return ex;
}

/// Two-channel teleportation: Alice's result travels as a superdense-coded
/// message over a second (phi+) pair. With EveMode::Qubit, Eve keeps the
/// message qubit and the run aborts before Bob can correct.
template <UniformSource Rng>
RunResult run_two_channel_aqt(const InputSpec &input, BellLabel teleport_channel, Rng &rng, std::size_t run_index = 0,
                              EveMode eve = EveMode::None) {
    if (eve == EveMode::Pair) {
        throw PreconditionError("pair interception needs a single-channel variant");
    }
    Ledger ledger;
    Custody custody;
    RunReport r;
    r.run_index = run_index;
    r.variant = Variant::TwoChannel;
    r.channel_before = teleport_channel;
    std::tie(r.alpha, r.beta) = input.resolve(rng);

    StateVector s = tensor(bell_state("A", "B", teleport_channel), bell_state("MA", "MB", kMessageChannel));
    ledger.epr_pairs_created += 2;
    custody.assign("A", Party::Alice);
    custody.assign("B", Party::Bob);
    custody.assign("MA", Party::Alice);
    custody.assign("MB", Party::Bob);

    s = tensor(s, StateVector::qubit("C", r.alpha, r.beta));
    custody.assign("C", Party::Alice);
    StateVector before = s;

    custody.require_held(Party::Alice, {"A", "C", "MA"});
    auto m = bell_measure_destructive(std::move(s), "A", "C", rng);
    s = std::move(m.state);
    custody.release("A");
    custody.release("C");
    r.alice_result = m.label;
    r.alice_syndrome = {m.d, m.e};
    r.message = message_for_label(m.label);
    s = apply_pauli(std::move(s), encode_superdense(*r.message), "MA");

    custody.send({"MA"}, Party::Alice, Party::Bob, ledger);
    if (eve == EveMode::Qubit) {
        const DensityMatrix held = eve_intercept_message_qubit(s, custody, "MA");
        r.aborted = true;
        r.fidelity = detail::output_fidelity(s, "B", r.alpha, r.beta);
        r.leakage = LeakageReport{std::nullopt, 1.0 - r.fidelity, message_distinguishability(held)};
        r.ledger_delta = ledger;
        return {std::move(r), {std::move(before), std::move(s)}};
    }
    custody.deliver({"MA"});

    custody.require_held(Party::Bob, {"MA", "MB", "B"});
    auto decoded = decode_superdense(std::move(s), "MA", "MB", rng);
    s = std::move(decoded.state);
    r.bob_result = label_for_message(decoded.message);
    r.correction = correction_for(teleport_channel, *r.bob_result);
    s = apply_pauli(std::move(s), r.correction, "B");
    r.fidelity = detail::output_fidelity(s, "B", r.alpha, r.beta);
    r.ledger_delta = ledger;
    return {std::move(r), {std::move(before), std::move(s)}};
}

template <SourceFactory Sources>
Experiment run_two_channel_experiment(std::span<const InputSpec> inputs, BellLabel teleport_channel,
                                      Sources &&sources, EveMode eve = EveMode::None) {
    Experiment ex;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto rng = sources(i, 0);
        auto res = run_two_channel_aqt(inputs[i], teleport_channel, rng, i, eve);
        ex.ledger.epr_pairs_created += res.report.ledger_delta.epr_pairs_created;
        ex.ledger.qubits_transmitted += res.report.ledger_delta.qubits_transmitted;
        ex.ledger.classical_bits_transmitted += res.report.ledger_delta.classical_bits_transmitted;
        ex.runs.push_back(std::move(res.report));
        ex.traces.push_back(std::move(res.trace));
    }
    return ex;
}

}  // namespace aqt
