#include "permafinetti/rng.hpp"

#include <cmath>
#include <numbers>

namespace permafinetti {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state ^= trial * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL;
    const std::uint64_t b = splitmix64(state);
    engine_.seed(a ^ (b + 0x632be59bd9b4e019ULL));
}

std::uint64_t TrialRng::bits() { return engine_(); }

double TrialRng::uniform() {
    // 53 random bits onto [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double TrialRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int TrialRng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

Complex TrialRng::unit_disk() {
    const double radius = std::sqrt(uniform());
    const double angle = 2.0 * std::numbers::pi * uniform();
    return Complex{radius * std::cos(angle), radius * std::sin(angle)};
}

Complex TrialRng::phase() {
    const double angle = 2.0 * std::numbers::pi * uniform();
    return Complex{std::cos(angle), std::sin(angle)};
}

double TrialRng::sign() { return (engine_() & 1u) ? 1.0 : -1.0; }

}  // namespace permafinetti
