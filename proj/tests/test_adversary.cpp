#include "aqt/adversary.hpp"

#include <gtest/gtest.h>

#include "aqt/protocol.hpp"
#include "aqt/reference.hpp"
#include "test_helpers.hpp"

using namespace aqt;
using aqt::testing::random_qubit;

namespace {

std::vector<InputSpec> haar(std::size_t n) { return std::vector<InputSpec>(n, InputSpec::haar_random()); }

}  // namespace

TEST(eve_intercept_pair, sees_alices_label_without_disturbing_bob) {
    for (auto ap : {Approach::RestoreChannel, Approach::TrackChannel}) {
        const auto in = haar(30);
        auto quiet = run_single_channel_aqt(in, ap, BellLabel::PsiMinus, SeededSources{41});
        auto eve = run_single_channel_aqt(in, ap, BellLabel::PsiMinus, SeededSources{41}, EveMode::Pair);
        for (std::size_t i = 0; i < in.size(); ++i) {
            const auto &r = eve.runs[i];
            ASSERT_TRUE(r.leakage.has_value());
            EXPECT_EQ(r.leakage->eve_observation, r.alice_result);
            EXPECT_LE(r.leakage->disturbance, kTolerance);
            EXPECT_LE(r.leakage->distinguishability, kTolerance);
            EXPECT_NEAR(r.fidelity, quiet.runs[i].fidelity, kTolerance);
            EXPECT_EQ(r.alice_result, quiet.runs[i].alice_result);
        }
        EXPECT_EQ(eve.ledger, quiet.ledger);
        auto rep = reference::replay_single_channel(eve, BellLabel::PsiMinus);
        EXPECT_GE(rep.min_fidelity, 1.0 - kTolerance);
    }
}

TEST(eve_intercept_pair, requires_qubits_in_flight) {
    Custody c;
    c.assign("A", Party::Alice);
    c.assign("C", Party::Alice);
    RandomSource rng(42);
    EXPECT_THROW(eve_intercept_pair(bell_state("A", "C", BellLabel::PsiPlus), c, "A", "C", rng), PreconditionError);
}

TEST(pair_distinguishability, label_statistics_do_not_depend_on_input) {
    RandomSource rng(43);
    for (int t = 0; t < 20; ++t) {
        const auto [a1, b1] = random_qubit(rng);
        const auto [a2, b2] = random_qubit(rng);
        for (auto ch : kAllBellLabels) {
            const auto p = pair_label_distribution(ch, a1, b1);
            for (double v : p) EXPECT_NEAR(v, 0.25, kTolerance);
            EXPECT_LE(total_variation(p, pair_label_distribution(ch, a2, b2)), kTolerance);
            EXPECT_LE(pair_distinguishability(ch, a1, b1), kTolerance);
        }
    }
}

TEST(eve_intercept_message_qubit, maximally_mixed_for_every_message) {
    const auto mixed = DensityMatrix::maximally_mixed({"MA"});
    for (auto m : kAllMessages) {
        EXPECT_LE(trace_distance(message_qubit_density(m), mixed), kTolerance);
        for (auto m2 : kAllMessages) {
            EXPECT_LE(trace_distance(message_qubit_density(m), message_qubit_density(m2)), kTolerance);
        }
    }
}

TEST(eve_intercept_message_qubit, aborts_the_two_channel_run) {
    auto ex = run_two_channel_experiment(haar(12), BellLabel::PhiMinus, SeededSources{44}, EveMode::Qubit);
    for (const auto &r : ex.runs) {
        EXPECT_TRUE(r.aborted);
        ASSERT_TRUE(r.leakage.has_value());
        EXPECT_FALSE(r.leakage->eve_observation.has_value());
        EXPECT_LE(r.leakage->distinguishability, kTolerance);
        EXPECT_NEAR(r.leakage->disturbance, 1.0 - r.fidelity, kTolerance);
        EXPECT_FALSE(r.bob_result.has_value());
    }
    EXPECT_EQ(ex.ledger, (Ledger{24, 12, 0}));
    auto rep = reference::replay_two_channel(ex);
    EXPECT_GE(rep.min_fidelity, 1.0 - kTolerance);
}

TEST(eve_intercept_message_qubit, requires_qubit_in_flight) {
    Custody c;
    c.assign("MA", Party::Alice);
    EXPECT_THROW(eve_intercept_message_qubit(bell_state("MA", "MB", BellLabel::PhiPlus), c, "MA"), PreconditionError);
}

TEST(eve_modes, rejected_on_wrong_variant) {
    RandomSource rng(45);
    EXPECT_THROW(run_two_channel_aqt(InputSpec::haar_random(), BellLabel::PsiMinus, rng, 0, EveMode::Pair),
                 PreconditionError);
}
