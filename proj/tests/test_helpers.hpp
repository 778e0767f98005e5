#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <numbers>
#include <utility>
#include <vector>

#include "aqt/random.hpp"
#include "aqt/state_vector.hpp"

namespace aqt::testing {

/// Replays fixed uniforms, then 0.5 forever. With a 1/2-1/2 outcome,
/// 0.25 forces bit 0 and 0.75 forces bit 1.
class ScriptedSource {
  public:
    ScriptedSource() = default;
    explicit ScriptedSource(std::vector<double> values) : values_(values.begin(), values.end()) {}

    double uniform() {
        if (values_.empty()) return 0.5;
        double v = values_.front();
        values_.pop_front();
        return v;
    }

  private:
    std::deque<double> values_;
};

inline double bit_draw(int bit) { return bit ? 0.75 : 0.25; }

/// Uniforms forcing a QND syndrome (d, e) when both outcomes are possible.
inline std::vector<double> syndrome_draws(int d, int e) { return {bit_draw(d), bit_draw(e)}; }

inline StateVector random_state(std::vector<QubitLabel> labels, RandomSource &rng) {
    std::vector<Complex> amps(std::size_t{1} << labels.size());
    double n = 0.0;
    for (auto &a : amps) {
        const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
        const double t = 2.0 * std::numbers::pi * rng.uniform();
        a = std::polar(r, t);
        n += std::norm(a);
    }
    for (auto &a : amps) a /= std::sqrt(n);
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

inline std::pair<Complex, Complex> random_qubit(RandomSource &rng) {
    const double u = rng.uniform(), v = rng.uniform();
    return {std::sqrt(u), std::polar(std::sqrt(1.0 - u), 2.0 * std::numbers::pi * v)};
}

}  // namespace aqt::testing
