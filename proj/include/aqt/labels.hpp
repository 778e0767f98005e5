#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "aqt/errors.hpp"

namespace aqt {

/// The four Bell states, in serialization order.
///   PsiPlus  = (|01> + |10>)/sqrt2    PsiMinus = (|01> - |10>)/sqrt2
///   PhiPlus  = (|00> + |11>)/sqrt2    PhiMinus = (|00> - |11>)/sqrt2
enum class BellLabel : std::uint8_t { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

inline constexpr std::array<BellLabel, 4> kAllBellLabels = {
    BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus};

/// Single-qubit Pauli correction. XZ is sigma_x * sigma_z: Z acts first.
enum class PauliOp : std::uint8_t { I = 0, Z = 1, X = 2, XZ = 3 };

inline constexpr std::array<PauliOp, 4> kAllPauliOps = {PauliOp::I, PauliOp::Z, PauliOp::X, PauliOp::XZ};

struct TwoBitMessage {
    bool hi = false;
    bool lo = false;

    constexpr unsigned value() const { return (hi ? 2U : 0U) | (lo ? 1U : 0U); }
    static constexpr TwoBitMessage from_value(unsigned v) { return {(v & 2U) != 0, (v & 1U) != 0}; }
    friend constexpr bool operator==(TwoBitMessage, TwoBitMessage) = default;
};

inline constexpr std::array<TwoBitMessage, 4> kAllMessages = {
    TwoBitMessage{false, false}, TwoBitMessage{false, true}, TwoBitMessage{true, false}, TwoBitMessage{true, true}};

inline constexpr std::string_view to_string(BellLabel b) {
    switch (b) {
        case BellLabel::PsiPlus: return "psi+";
        case BellLabel::PsiMinus: return "psi-";
        case BellLabel::PhiPlus: return "phi+";
        case BellLabel::PhiMinus: return "phi-";
    }
    return "?";
}

inline constexpr std::string_view to_string(PauliOp p) {
    switch (p) {
        case PauliOp::I: return "I";
        case PauliOp::Z: return "Z";
        case PauliOp::X: return "X";
        case PauliOp::XZ: return "XZ";
    }
    return "?";
}

inline std::string to_string(TwoBitMessage m) {
    return std::string{m.hi ? '1' : '0', m.lo ? '1' : '0'};
}

inline BellLabel parse_bell_label(std::string_view s) {
    for (auto b : kAllBellLabels) {
        if (to_string(b) == s) {
            return b;
        }
    }
    throw UsageError("unknown Bell label '" + std::string(s) + "' (expected psi+, psi-, phi+ or phi-)");
}

inline PauliOp parse_pauli(std::string_view s) {
    for (auto p : kAllPauliOps) {
        if (to_string(p) == s) {
            return p;
        }
    }
    throw UsageError("unknown Pauli operator '" + std::string(s) + "'");
}

inline TwoBitMessage parse_message(std::string_view s) {
    if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1')) {
        throw UsageError("malformed two-bit message '" + std::string(s) + "'");
    }
    return {s[0] == '1', s[1] == '1'};
}

inline std::ostream &operator<<(std::ostream &os, BellLabel b) { return os << to_string(b); }
inline std::ostream &operator<<(std::ostream &os, PauliOp p) { return os << to_string(p); }
inline std::ostream &operator<<(std::ostream &os, TwoBitMessage m) { return os << to_string(m); }

}  // namespace aqt
