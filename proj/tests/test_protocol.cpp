#include "aqt/protocol.hpp"

#include <gtest/gtest.h>

#include "aqt/reference.hpp"
#include "test_helpers.hpp"

using namespace aqt;
using aqt::testing::random_qubit;
using aqt::testing::ScriptedSource;
using aqt::testing::syndrome_draws;

namespace {

std::vector<InputSpec> haar(std::size_t n) { return std::vector<InputSpec>(n, InputSpec::haar_random()); }

/// Per-run scripted sources: run i forces syndromes[i] (Alice, then Bob's deterministic pair).
struct ForcedSyndromes {
    std::vector<std::pair<int, int>> syndromes;
    ScriptedSource operator()(std::size_t run, std::uint64_t) const {
        auto [d, e] = syndromes.at(run);
        return ScriptedSource(syndrome_draws(d, e));
    }
};

}  // namespace

TEST(custody, transfer_counts_qubits) {
    Custody c;
    Ledger l;
    c.assign("A", Party::Alice);
    c.assign("C", Party::Alice);
    c.assign("B", Party::Bob);
    c = custody_transfer(c, {"A", "C"}, Party::Alice, Party::Bob, l);
    EXPECT_EQ(l.qubits_transmitted, 2U);
    EXPECT_TRUE(c.held_by("A", Party::Bob));
    c = custody_transfer(c, {"A"}, Party::Bob, Party::Alice, l);
    EXPECT_EQ(l.qubits_transmitted, 3U);
    EXPECT_TRUE(c.held_by("A", Party::Alice));
}

TEST(custody, sender_must_hold_every_qubit) {
    Custody c;
    Ledger l;
    c.assign("A", Party::Alice);
    c.assign("B", Party::Alice);
    EXPECT_THROW(custody_transfer(c, {"B"}, Party::Bob, Party::Alice, l), PreconditionError);
    EXPECT_EQ(l.qubits_transmitted, 0U);
    EXPECT_THROW(c.assign("A", Party::Bob), PreconditionError);
}

TEST(custody, in_flight_qubits_belong_to_nobody) {
    Custody c;
    Ledger l;
    c.assign("A", Party::Alice);
    c.send({"A"}, Party::Alice, Party::Bob, l);
    EXPECT_TRUE(c.in_flight("A"));
    EXPECT_THROW(c.require_held(Party::Alice, {"A"}), PreconditionError);
    EXPECT_THROW(c.require_held(Party::Bob, {"A"}), PreconditionError);
    c.deliver({"A"});
    EXPECT_TRUE(c.held_by("A", Party::Bob));
    EXPECT_THROW(c.deliver({"A"}), PreconditionError);
}

TEST(custody, covers_register) {
    Custody c;
    c.assign("A", Party::Alice);
    c.assign("B", Party::Bob);
    EXPECT_TRUE(c.covers(bell_state("A", "B", BellLabel::PhiPlus)));
    EXPECT_FALSE(c.covers(new_register({"A"})));
    c.rename("B", "Q");
    EXPECT_FALSE(c.covers(bell_state("A", "B", BellLabel::PhiPlus)));
}

TEST(input_spec, normalization) {
    EXPECT_THROW(InputSpec::amplitudes(1.0, 1.0), PreconditionError);
    auto in = InputSpec::amplitudes(0.6, Complex{0, 0.8});
    RandomSource rng(1);
    auto [a, b] = in.resolve(rng);
    EXPECT_NEAR(std::norm(a) + std::norm(b), 1.0, 1e-15);
    auto [ha, hb] = InputSpec::haar_random().resolve(rng);
    EXPECT_NEAR(std::norm(ha) + std::norm(hb), 1.0, 1e-12);
}

TEST(op_baseline, zero_input_singlet) {
    RandomSource rng(2);
    for (int t = 0; t < 8; ++t) {
        auto res = run_op_baseline(InputSpec::amplitudes(1, 0), BellLabel::PsiMinus, rng);
        EXPECT_NEAR(res.report.fidelity, 1.0, kTolerance);
        EXPECT_EQ(res.report.ledger_delta.classical_bits_transmitted, 2U);
        EXPECT_EQ(res.report.ledger_delta.epr_pairs_created, 1U);
        EXPECT_FALSE(res.report.channel_after.has_value());
        EXPECT_EQ(res.trace.after.labels(), (std::vector<QubitLabel>{"B"}));
    }
}

TEST(op_baseline, phi_plus_channel_psi_minus_result_needs_xz) {
    RandomSource src(3);
    const auto [a, b] = random_qubit(src);
    ScriptedSource rng(syndrome_draws(1, 1));
    auto res = run_op_baseline(InputSpec::amplitudes(a, b), BellLabel::PhiPlus, rng);
    EXPECT_EQ(res.report.alice_result, BellLabel::PsiMinus);
    EXPECT_EQ(res.report.correction, PauliOp::XZ);
    EXPECT_NEAR(res.report.fidelity, 1.0, kTolerance);
}

TEST(op_baseline, consumes_one_pair_per_run) {
    auto ex = run_op_experiment(haar(10), BellLabel::PsiMinus, SeededSources{4});
    EXPECT_EQ(ex.ledger.epr_pairs_created, 10U);
    EXPECT_EQ(ex.ledger.classical_bits_transmitted, 20U);
    EXPECT_EQ(ex.ledger.qubits_transmitted, 0U);
}

TEST(single_channel, singlet_run_with_psi_plus_syndrome) {
    RandomSource src(5);
    const auto [a, b] = random_qubit(src);
    const std::vector<InputSpec> in = {InputSpec::amplitudes(a, b)};
    auto ex = run_single_channel_aqt(in, Approach::RestoreChannel, BellLabel::PsiMinus, ForcedSyndromes{{{1, 0}}});
    const auto &r = ex.runs.at(0);
    EXPECT_EQ(r.alice_result, BellLabel::PsiPlus);
    EXPECT_EQ(r.bob_result, BellLabel::PsiPlus);
    EXPECT_EQ(r.correction, PauliOp::Z);
    EXPECT_EQ(r.restore, PauliOp::Z);
    EXPECT_NEAR(r.fidelity, 1.0, kTolerance);
    EXPECT_EQ(r.channel_after, BellLabel::PsiMinus);
    EXPECT_EQ(r.ledger_delta, (Ledger{1, 3, 0}));
}

TEST(single_channel, restore_reuses_one_pair) {
    auto ex = run_single_channel_aqt(haar(10), Approach::RestoreChannel, BellLabel::PsiMinus, SeededSources{6});
    EXPECT_EQ(ex.ledger.epr_pairs_created, 1U);
    EXPECT_EQ(ex.ledger.classical_bits_transmitted, 0U);
    EXPECT_EQ(ex.ledger.qubits_transmitted, 30U);
    for (const auto &r : ex.runs) {
        EXPECT_EQ(r.channel_after, BellLabel::PsiMinus);
        EXPECT_EQ(r.channel_before, BellLabel::PsiMinus);
        EXPECT_GE(r.fidelity, 1.0 - kTolerance);
    }
}

TEST(single_channel, tracking_follows_forced_syndromes) {
    const std::vector<std::pair<int, int>> forced = {{0, 1}, {1, 0}, {0, 0}};
    RandomSource src(7);
    std::vector<InputSpec> in;
    for (int i = 0; i < 3; ++i) {
        auto [a, b] = random_qubit(src);
        in.push_back(InputSpec::amplitudes(a, b));
    }
    auto ex = run_single_channel_aqt(in, Approach::TrackChannel, BellLabel::PsiMinus, ForcedSyndromes{forced});
    BellLabel expected_channel = BellLabel::PsiMinus;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto &r = ex.runs[i];
        EXPECT_EQ(r.channel_before, expected_channel);
        EXPECT_EQ(r.alice_result, syndrome_to_bell(forced[i].first, forced[i].second));
        EXPECT_EQ(r.channel_after, r.alice_result);
        EXPECT_FALSE(r.restore.has_value());
        EXPECT_EQ(r.correction, correction_for(expected_channel, r.alice_result));
        EXPECT_GE(r.fidelity, 1.0 - kTolerance);
        expected_channel = *r.channel_after;
    }
    const auto replay = reference::replay_single_channel(ex, BellLabel::PsiMinus);
    EXPECT_TRUE(replay.failure.empty()) << replay.failure;
    EXPECT_GE(replay.min_fidelity, 1.0 - kTolerance);
}

TEST(single_channel, perfect_for_every_channel_and_approach) {
    const auto in = haar(100);
    for (auto ch : kAllBellLabels)
        for (auto ap : {Approach::RestoreChannel, Approach::TrackChannel}) {
            auto ex = run_single_channel_aqt(in, ap, ch, SeededSources{100 + static_cast<unsigned>(ch)});
            ASSERT_EQ(ex.runs.size(), 100U);
            for (const auto &r : ex.runs) {
                EXPECT_GE(r.fidelity, 1.0 - kTolerance);
                EXPECT_EQ(r.bob_result, r.alice_result);
            }
        }
}

TEST(single_channel, approaches_agree_per_seed) {
    const auto in = haar(40);
    auto restore = run_single_channel_aqt(in, Approach::RestoreChannel, BellLabel::PhiMinus, SeededSources{8});
    auto track = run_single_channel_aqt(in, Approach::TrackChannel, BellLabel::PhiMinus, SeededSources{8});
    for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(restore.runs[i].alice_result, track.runs[i].alice_result);
        EXPECT_NEAR(restore.runs[i].fidelity, track.runs[i].fidelity, kTolerance);
    }
}

TEST(single_channel, rejects_empty_input_and_qubit_eve) {
    std::vector<InputSpec> none;
    EXPECT_THROW(run_single_channel_aqt(none, Approach::RestoreChannel, BellLabel::PsiMinus, SeededSources{}),
                 PreconditionError);
    EXPECT_THROW(
        run_single_channel_aqt(haar(1), Approach::RestoreChannel, BellLabel::PsiMinus, SeededSources{}, EveMode::Qubit),
        PreconditionError);
}

TEST(two_channel, result_phi_plus_over_singlet) {
    RandomSource src(9);
    const auto [a, b] = random_qubit(src);
    ScriptedSource rng(syndrome_draws(0, 0));
    auto res = run_two_channel_aqt(InputSpec::amplitudes(a, b), BellLabel::PsiMinus, rng);
    EXPECT_EQ(res.report.alice_result, BellLabel::PhiPlus);
    EXPECT_EQ(to_string(*res.report.message), "10");
    EXPECT_EQ(res.report.bob_result, BellLabel::PhiPlus);
    EXPECT_EQ(res.report.correction, PauliOp::XZ);
    EXPECT_NEAR(res.report.fidelity, 1.0, kTolerance);
}

TEST(two_channel, identity_case_and_ledger) {
    // Two uniforms for the Haar input, then the forced (1,1) syndrome.
    ScriptedSource forced({0.3, 0.6, 0.75, 0.75});
    auto r = run_two_channel_aqt(InputSpec::haar_random(), BellLabel::PsiMinus, forced).report;
    EXPECT_EQ(r.alice_result, BellLabel::PsiMinus);
    EXPECT_EQ(r.correction, PauliOp::I);
    EXPECT_NEAR(r.fidelity, 1.0, kTolerance);
    EXPECT_EQ(r.ledger_delta, (Ledger{2, 1, 0}));
}

TEST(two_channel, all_results_all_channels) {
    for (auto ch : kAllBellLabels) {
        auto ex = run_two_channel_experiment(haar(40), ch, SeededSources{10});
        for (const auto &r : ex.runs) {
            EXPECT_EQ(r.bob_result, r.alice_result);
            EXPECT_GE(r.fidelity, 1.0 - kTolerance);
        }
        EXPECT_EQ(ex.ledger, (Ledger{80, 40, 0}));
    }
}

TEST(oracle_equivalence, every_variant_matches_reference_replay) {
    const auto in = haar(25);
    for (auto ch : kAllBellLabels) {
        for (auto ap : {Approach::RestoreChannel, Approach::TrackChannel}) {
            auto ex = run_single_channel_aqt(in, ap, ch, SeededSources{11});
            auto rep = reference::replay_single_channel(ex, ch);
            EXPECT_TRUE(rep.failure.empty()) << rep.failure;
            EXPECT_GE(rep.min_fidelity, 1.0 - kTolerance);
        }
        auto op = reference::replay_op(run_op_experiment(in, ch, SeededSources{12}));
        EXPECT_GE(op.min_fidelity, 1.0 - kTolerance);
        auto dual = reference::replay_two_channel(run_two_channel_experiment(in, ch, SeededSources{13}));
        EXPECT_TRUE(dual.failure.empty()) << dual.failure;
        EXPECT_GE(dual.min_fidelity, 1.0 - kTolerance);
    }
}

TEST(reproducibility, same_seed_same_reports) {
    auto a = run_single_channel_aqt(haar(20), Approach::TrackChannel, BellLabel::PhiPlus, SeededSources{14});
    auto b = run_single_channel_aqt(haar(20), Approach::TrackChannel, BellLabel::PhiPlus, SeededSources{14});
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(a.runs[i].alice_result, b.runs[i].alice_result);
        EXPECT_EQ(a.runs[i].alpha, b.runs[i].alpha);
        EXPECT_EQ(a.runs[i].beta, b.runs[i].beta);
    }
}
