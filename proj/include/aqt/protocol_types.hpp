#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqt/errors.hpp"
#include "aqt/labels.hpp"
#include "aqt/random.hpp"
#include "aqt/state_vector.hpp"

namespace aqt {

enum class Party : std::uint8_t { Alice, Bob, Charles, Eve };

inline constexpr std::string_view to_string(Party p) {
    switch (p) {
        case Party::Alice: return "Alice";
        case Party::Bob: return "Bob";
        case Party::Charles: return "Charles";
        case Party::Eve: return "Eve";
    }
    return "?";
}

/// Resource counters for one experiment. Counts only grow.
struct Ledger {
    std::uint64_t epr_pairs_created = 0;
    std::uint64_t qubits_transmitted = 0;
    std::uint64_t classical_bits_transmitted = 0;

    friend Ledger operator-(const Ledger &a, const Ledger &b) {
        return {a.epr_pairs_created - b.epr_pairs_created, a.qubits_transmitted - b.qubits_transmitted,
                a.classical_bits_transmitted - b.classical_bits_transmitted};
    }
    friend bool operator==(const Ledger &, const Ledger &) = default;
};

/// Who physically holds each qubit. A qubit in flight has left its sender
/// and belongs to nobody until delivered.
class Custody {
  public:
    struct Holder {
        Party party;
        std::optional<Party> in_flight_to;
    };

    void assign(const QubitLabel &q, Party p) {
        if (holders_.contains(q)) {
            throw PreconditionError("qubit '" + q.name + "' already has a custodian");
        }
        holders_[q] = {p, std::nullopt};
    }

    void release(const QubitLabel &q) {
        if (holders_.erase(q) == 0) {
            throw PreconditionError("qubit '" + q.name + "' has no custodian");
        }
    }

    const Holder &holder(const QubitLabel &q) const {
        auto it = holders_.find(q);
        if (it == holders_.end()) {
            throw PreconditionError("qubit '" + q.name + "' has no custodian");
        }
        return it->second;
    }

    bool held_by(const QubitLabel &q, Party p) const {
        auto it = holders_.find(q);
        return it != holders_.end() && !it->second.in_flight_to && it->second.party == p;
    }

    bool in_flight(const QubitLabel &q) const {
        auto it = holders_.find(q);
        return it != holders_.end() && it->second.in_flight_to.has_value();
    }

    /// Throws unless `p` holds every label (and none is in flight).
    void require_held(Party p, const std::vector<QubitLabel> &labels) const {
        for (const auto &q : labels) {
            if (!held_by(q, p)) {
                throw PreconditionError(std::string(to_string(p)) + " does not hold qubit '" + q.name + "'");
            }
        }
    }

    /// Puts qubits in flight from `from` to `to`; counted on dispatch.
    void send(const std::vector<QubitLabel> &labels, Party from, Party to, Ledger &ledger) {
        require_held(from, labels);
        for (const auto &q : labels) {
            holders_[q].in_flight_to = to;
        }
        ledger.qubits_transmitted += labels.size();
    }

    void deliver(const std::vector<QubitLabel> &labels) {
        for (const auto &q : labels) {
            if (!in_flight(q)) {
                throw PreconditionError("qubit '" + q.name + "' is not in flight");
            }
        }
        for (const auto &q : labels) {
            auto &h = holders_[q];
            h.party = *h.in_flight_to;
            h.in_flight_to.reset();
        }
    }

    /// Takes an in-flight qubit out of the channel (interception).
    void seize(const QubitLabel &q, Party p) {
        if (!in_flight(q)) {
            throw PreconditionError("qubit '" + q.name + "' is not in flight");
        }
        holders_[q] = {p, std::nullopt};
    }

    void rename(const QubitLabel &from, const QubitLabel &to) {
        auto node = holders_.extract(from);
        if (node.empty()) {
            throw PreconditionError("qubit '" + from.name + "' has no custodian");
        }
        if (holders_.contains(to)) {
            throw PreconditionError("qubit '" + to.name + "' already has a custodian");
        }
        node.key() = to;
        holders_.insert(std::move(node));
    }

    /// Every register label has exactly one custodian and nothing else is tracked.
    bool covers(const StateVector &s) const {
        if (holders_.size() != s.num_qubits()) return false;
        for (const auto &q : s.labels()) {
            if (!holders_.contains(q)) return false;
        }
        return true;
    }

    std::size_t size() const { return holders_.size(); }

  private:
    std::map<QubitLabel, Holder> holders_;
};

/// Sends `labels` from one party to another and delivers them.
inline Custody custody_transfer(Custody custody, const std::vector<QubitLabel> &labels, Party from, Party to,
                                Ledger &ledger) {
    custody.send(labels, from, to, ledger);
    custody.deliver(labels);
    return custody;
}

/// State handed over by Charles: explicit amplitudes or a Haar-random draw.
class InputSpec {
  public:
    static InputSpec haar_random() { return InputSpec(); }

    /// |alpha|^2 + |beta|^2 must be 1 within `tolerance`.
    static InputSpec amplitudes(Complex alpha, Complex beta, double tolerance = 1e-9) {
        const double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > tolerance) {
            throw PreconditionError("input amplitudes are not normalized (|a|^2+|b|^2 = " + std::to_string(n) + ")");
        }
        const double r = 1.0 / std::sqrt(n);
        return InputSpec(std::pair{alpha * r, beta * r});
    }

    bool is_random() const { return !explicit_.has_value(); }
    const std::optional<std::pair<Complex, Complex>> &explicit_amplitudes() const { return explicit_; }

    /// Explicit amplitudes, or a Haar draw from the first two uniforms:
    /// alpha = sqrt(u), beta = exp(2 pi i v) sqrt(1 - u).
    template <UniformSource Rng>
    std::pair<Complex, Complex> resolve(Rng &rng) const {
        if (explicit_) return *explicit_;
        return haar_amplitudes(rng.uniform(), rng.uniform());
    }

    static std::pair<Complex, Complex> haar_amplitudes(double u, double v) {
        const double phi = 2.0 * std::numbers::pi * v;
        return {Complex{std::sqrt(u), 0.0}, std::polar(std::sqrt(1.0 - u), phi)};
    }

  private:
    InputSpec() = default;
    explicit InputSpec(std::pair<Complex, Complex> amps) : explicit_(amps) {}

    std::optional<std::pair<Complex, Complex>> explicit_;
};

enum class Variant : std::uint8_t { OP, SingleChannelRestore, SingleChannelTrack, TwoChannel };

inline constexpr std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::OP: return "op";
        case Variant::SingleChannelRestore: return "single-i";
        case Variant::SingleChannelTrack: return "single-ii";
        case Variant::TwoChannel: return "dual";
    }
    return "?";
}

/// How Bob prepares the next single-channel run.
enum class Approach : std::uint8_t {
    RestoreChannel,  // rotate the returned pair back to the initial channel
    TrackChannel,    // keep the measured pair; both sides switch correction tables
};

enum class EveMode : std::uint8_t { None, Pair, Qubit };

inline constexpr std::string_view to_string(EveMode e) {
    switch (e) {
        case EveMode::None: return "none";
        case EveMode::Pair: return "pair";
        case EveMode::Qubit: return "qubit";
    }
    return "?";
}

struct LeakageReport {
    std::optional<BellLabel> eve_observation;
    double disturbance = 0.0;        // 1 - Bob's final fidelity
    double distinguishability = 0.0; // worst-case distance of Eve's view across inputs/messages
};

struct RunReport {
    std::size_t run_index = 0;
    Variant variant = Variant::OP;
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    BellLabel channel_before = BellLabel::PsiMinus;
    BellLabel alice_result = BellLabel::PsiMinus;
    std::pair<int, int> alice_syndrome{1, 1};
    std::optional<BellLabel> bob_result;
    std::optional<TwoBitMessage> message;
    PauliOp correction = PauliOp::I;
    std::optional<PauliOp> restore;
    double fidelity = 0.0;
    std::optional<BellLabel> channel_after;
    Ledger ledger_delta;
    bool aborted = false;
    std::optional<LeakageReport> leakage;
};

/// Global state snapshots around one run, for replay against a reference evolution.
struct RunTrace {
    StateVector before;  // all live qubits once Charles has delivered C
    StateVector after;   // all live qubits once Bob has finished
};

struct Experiment {
    std::vector<RunReport> runs;
    std::vector<RunTrace> traces;
    Ledger ledger;
};

/// Per-run sources derived from one seed; stream 0 = protocol, 1 = Eve.
struct SeededSources {
    std::uint64_t seed = 0;
    RandomSource operator()(std::size_t run_index, std::uint64_t stream) const {
        return RandomSource::for_run(seed, run_index, stream);
    }
};

/// Callable (run_index, stream) -> UniformSource.
template <class F>
concept SourceFactory = requires(F f, std::size_t i, std::uint64_t s) {
    { f(i, s) } -> UniformSource;
};

}  // namespace aqt
