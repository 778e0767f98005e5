#pragma once

// Command-line harness: `aqt run | tables | verify`.
//
// Exit codes: 0 success, 1 fidelity or invariant failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aqt/invariants.hpp"
#include "aqt/protocol.hpp"

namespace aqt {

enum class OutputFormat { Text, Json };

struct ExperimentConfig {
    Variant variant = Variant::SingleChannelRestore;
    std::size_t runs = 1;
    BellLabel channel = BellLabel::PsiMinus;
    InputSpec input = InputSpec::haar_random();
    std::uint64_t seed = 0;
    EveMode eve = EveMode::None;
    OutputFormat format = OutputFormat::Text;
    std::optional<std::string> out;
};

enum class Command { Run, Tables, Verify };

struct ParsedCommand {
    Command command = Command::Run;
    ExperimentConfig config;
};

/// Thrown for --help; carries the rendered help text.
class HelpRequested : public Error {
  public:
    using Error::Error;
};

inline void validate(const ExperimentConfig &c) {
    if (c.runs < 1) {
        throw UsageError("--runs must be at least 1");
    }
    if (c.eve == EveMode::Qubit && c.variant != Variant::TwoChannel) {
        throw UsageError("--eve qubit requires --variant dual");
    }
    if (c.eve == EveMode::Pair && c.variant != Variant::SingleChannelRestore && c.variant != Variant::SingleChannelTrack) {
        throw UsageError("--eve pair requires --variant single-i or single-ii");
    }
}

/// "aRe,aIm,bRe,bIm" with |a|^2 + |b|^2 within 1e-6 of 1.
inline InputSpec parse_input_amplitudes(const std::string &text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw UsageError("malformed --input component '" + item + "'");
        }
    }
    if (v.size() != 4) {
        throw UsageError("--input expects four comma-separated numbers aRe,aIm,bRe,bIm");
    }
    const Complex a{v[0], v[1]}, b{v[2], v[3]};
    const double n = std::norm(a) + std::norm(b);
    if (std::abs(n - 1.0) > 1e-6) {
        throw UsageError("--input amplitudes are not normalized (|a|^2+|b|^2 = " + std::to_string(n) + ")");
    }
    return InputSpec::amplitudes(a, b, 1e-6);
}

/// Parses arguments (without the program name).
inline ParsedCommand parse_config(const std::vector<std::string> &args) {
    CLI::App app{"All-quantum teleportation protocol simulator", "aqt"};
    app.require_subcommand(1);

    ParsedCommand parsed;
    ExperimentConfig &c = parsed.config;
    std::string variant = "single-i", channel = "psi-", eve = "none", format = "text", input;
    bool random_input = false;
    std::string out;

    auto *run = app.add_subcommand("run", "Run a teleportation experiment");
    run->add_option("--variant", variant, "op | single-i | single-ii | dual")
        ->check(CLI::IsMember({"op", "single-i", "single-ii", "dual"}));
    run->add_option("--runs", c.runs, "Number of teleportation runs")->check(CLI::PositiveNumber);
    run->add_option("--channel", channel, "Initial Bell channel: psi- | psi+ | phi- | phi+")
        ->check(CLI::IsMember({"psi-", "psi+", "phi-", "phi+"}));
    auto *in_opt = run->add_option("--input", input, "Explicit input aRe,aIm,bRe,bIm");
    auto *rand_opt = run->add_flag("--random-input", random_input, "Haar-random input per run (default)");
    in_opt->excludes(rand_opt);
    run->add_option("--seed", c.seed, "64-bit seed");
    run->add_option("--eve", eve, "none | pair | qubit")->check(CLI::IsMember({"none", "pair", "qubit"}));
    run->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    run->add_option("--out", out, "Write the report to FILE");

    auto *tables = app.add_subcommand("tables", "Print correction, restore and superdense tables");
    auto *verify = app.add_subcommand("verify", "Run the invariant suite");

    std::vector<std::string> storage = {"aqt"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &s : storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }

    if (*tables) {
        parsed.command = Command::Tables;
        return parsed;
    }
    if (*verify) {
        parsed.command = Command::Verify;
        return parsed;
    }
    parsed.command = Command::Run;
    c.variant = variant == "op"          ? Variant::OP
                : variant == "single-ii" ? Variant::SingleChannelTrack
                : variant == "dual"      ? Variant::TwoChannel
                                         : Variant::SingleChannelRestore;
    c.channel = parse_bell_label(channel);
    c.eve = eve == "pair" ? EveMode::Pair : eve == "qubit" ? EveMode::Qubit : EveMode::None;
    c.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (!input.empty()) c.input = parse_input_amplitudes(input);
    if (!out.empty()) c.out = out;
    validate(c);
    return parsed;
}

inline Experiment run_experiment(const ExperimentConfig &c) {
    validate(c);
    const std::vector<InputSpec> inputs(c.runs, c.input);
    const SeededSources sources{c.seed};
    switch (c.variant) {
        case Variant::OP: return run_op_experiment(inputs, c.channel, sources);
        case Variant::SingleChannelRestore:
            return run_single_channel_aqt(inputs, Approach::RestoreChannel, c.channel, sources, c.eve);
        case Variant::SingleChannelTrack:
            return run_single_channel_aqt(inputs, Approach::TrackChannel, c.channel, sources, c.eve);
        case Variant::TwoChannel: return run_two_channel_experiment(inputs, c.channel, sources, c.eve);
    }
    return {};
}

inline constexpr double kReportFidelityThreshold = 1.0 - 1e-9;

inline bool all_fidelities_ok(const std::vector<RunReport> &runs) {
    for (const auto &r : runs) {
        if (!r.aborted && !(r.fidelity >= kReportFidelityThreshold)) return false;
    }
    return true;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson amplitude_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

template <class T>
ojson optional_json(const std::optional<T> &v) {
    if (!v) return nullptr;
    return std::string(to_string(*v));
}

inline ojson ledger_json(const Ledger &l) {
    return {{"epr_pairs_created", l.epr_pairs_created},
            {"qubits_transmitted", l.qubits_transmitted},
            {"classical_bits_transmitted", l.classical_bits_transmitted}};
}

inline ojson config_json(const ExperimentConfig &c) {
    ojson input = "random";
    if (auto amps = c.input.explicit_amplitudes()) {
        input = {{"alpha", amplitude_json(amps->first)}, {"beta", amplitude_json(amps->second)}};
    }
    return {{"variant", to_string(c.variant)}, {"runs", c.runs},     {"channel", to_string(c.channel)},
            {"input", input},                  {"seed", c.seed},     {"eve", to_string(c.eve)},
            {"format", c.format == OutputFormat::Json ? "json" : "text"}};
}

inline ojson run_json(const RunReport &r) {
    ojson j;
    j["run_index"] = r.run_index;
    j["variant"] = to_string(r.variant);
    j["input"] = {{"alpha", amplitude_json(r.alpha)}, {"beta", amplitude_json(r.beta)}};
    j["channel_before"] = to_string(r.channel_before);
    j["alice_result"] = to_string(r.alice_result);
    j["alice_syndrome"] = std::to_string(r.alice_syndrome.first) + std::to_string(r.alice_syndrome.second);
    j["bob_result"] = optional_json(r.bob_result);
    j["message"] = r.message ? ojson(to_string(*r.message)) : ojson(nullptr);
    j["correction"] = to_string(r.correction);
    j["restore"] = optional_json(r.restore);
    j["fidelity"] = r.fidelity;
    j["channel_after"] = optional_json(r.channel_after);
    j["ledger_delta"] = ledger_json(r.ledger_delta);
    j["aborted"] = r.aborted;
    if (r.leakage) {
        j["leakage"] = {{"eve_observation", optional_json(r.leakage->eve_observation)},
                        {"disturbance", r.leakage->disturbance},
                        {"distinguishability", r.leakage->distinguishability}};
    } else {
        j["leakage"] = nullptr;
    }
    return j;
}

inline std::string fixed(double v, int digits = 12) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace detail

inline std::string emit_report(const ExperimentConfig &config, const Experiment &ex, OutputFormat format) {
    const bool ok = all_fidelities_ok(ex.runs);
    if (format == OutputFormat::Json) {
        detail::ojson j;
        j["config"] = detail::config_json(config);
        j["runs"] = detail::ojson::array();
        for (const auto &r : ex.runs) j["runs"].push_back(detail::run_json(r));
        j["ledger"] = detail::ledger_json(ex.ledger);
        j["all_fidelities_ok"] = ok;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto &r : ex.runs) {
        os << "run " << r.run_index << " [" << to_string(r.variant) << "] channel " << r.channel_before << " alice "
           << r.alice_result << " (" << r.alice_syndrome.first << r.alice_syndrome.second << ")";
        if (r.bob_result) os << " bob " << *r.bob_result;
        if (r.message) os << " message " << *r.message;
        os << " correction " << r.correction;
        if (r.restore) os << " restore " << *r.restore;
        os << " fidelity " << detail::fixed(r.fidelity);
        if (r.channel_after) os << " channel_after " << *r.channel_after;
        if (r.aborted) os << " ABORTED";
        if (r.leakage) {
            os << " eve";
            if (r.leakage->eve_observation) os << " saw " << *r.leakage->eve_observation;
            os << " disturbance " << detail::fixed(r.leakage->disturbance) << " distinguishability "
               << detail::fixed(r.leakage->distinguishability);
        }
        os << "\n";
    }
    os << "ledger: epr_pairs_created " << ex.ledger.epr_pairs_created << ", qubits_transmitted "
       << ex.ledger.qubits_transmitted << ", classical_bits_transmitted " << ex.ledger.classical_bits_transmitted << "\n";
    os << "all_fidelities_ok: " << (ok ? "true" : "false") << "\n";
    return os.str();
}

inline std::string render_tables() {
    std::ostringstream os;
    auto cell = [](auto v) {
        std::string s(to_string(v));
        return s + std::string(6 - std::min<std::size_t>(6, s.size()), ' ');
    };
    auto header = [&](const char *corner) {
        os << std::left << std::setw(10) << corner;
        for (auto b : kAllBellLabels) os << cell(b);
        os << "\n";
    };

    os << "Correction applied by Bob (row: channel, column: Alice's result)\n";
    header("channel");
    for (auto ch : kAllBellLabels) {
        os << std::setw(10) << to_string(ch);
        for (auto r : kAllBellLabels) os << cell(correction_for(ch, r));
        os << "\n";
    }

    os << "\nRestore operator on A (row: measured pair, column: target channel)\n";
    header("measured");
    for (auto m : kAllBellLabels) {
        os << std::setw(10) << to_string(m);
        for (auto t : kAllBellLabels) os << cell(restore_op(m, t));
        os << "\n";
    }

    os << "\nChannel expansions: |channel>_AB|chi>_C = 1/2 sum |R>_AC (x) Bob's state\n";
    for (auto ch : kAllBellLabels) {
        os << "  " << to_string(ch) << ":";
        for (const auto &br : bell_expand(ch)) os << "  " << to_string(br.result) << " -> " << br.bob.describe();
        os << "\n";
    }

    os << "\nSyndrome (D,E) -> Bell label\n";
    for (int d = 0; d < 2; ++d)
        for (int e = 0; e < 2; ++e) os << "  (" << d << "," << e << ") -> " << syndrome_to_bell(d, e) << "\n";

    os << "\nSuperdense coding over " << kMessageChannel << "\n";
    os << "  result  message  encode\n";
    for (auto b : kAllBellLabels) {
        const auto m = message_for_label(b);
        os << "  " << cell(b) << "  " << to_string(m) << "       " << encode_superdense(m) << "\n";
    }
    os << "  decode: phi+ -> 00, psi+ -> 01, phi- -> 10, psi- -> 11\n";
    return os.str();
}

/// Full CLI behaviour; `main` only forwards to this.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    ParsedCommand cmd;
    try {
        cmd = parse_config(args);
    } catch (const HelpRequested &h) {
        out << h.what();
        return 0;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    switch (cmd.command) {
        case Command::Tables:
            out << render_tables();
            return 0;
        case Command::Verify: {
            bool ok = true;
            for (const auto &r : run_invariant_suite()) {
                out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
                if (!r.detail.empty()) out << "  (" << r.detail << ")";
                out << "\n";
                ok &= r.passed;
            }
            out << (ok ? "all invariants hold\n" : "invariant failures\n");
            return ok ? 0 : 1;
        }
        case Command::Run: break;
    }

    const Experiment ex = run_experiment(cmd.config);
    const std::string report = emit_report(cmd.config, ex, cmd.config.format);
    if (cmd.config.out) {
        std::ofstream f(*cmd.config.out, std::ios::binary);
        if (!f || !(f << report) || !f.flush()) {
            err << "error: cannot write report to '" << *cmd.config.out << "'\n";
            return 2;
        }
    } else {
        out << report;
    }
    return all_fidelities_ok(ex.runs) ? 0 : 1;
}

}  // namespace aqt
