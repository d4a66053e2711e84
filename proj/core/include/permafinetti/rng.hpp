#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "permafinetti/complex_matrix.hpp"

namespace permafinetti {

// Deterministic per-trial random stream: the state is derived from
// (seed, trial) with a splitmix64 scramble, so trial results are independent
// of scheduling and reproducible across runs. Floating-point draws avoid
// std::uniform_real_distribution so the byte stream depends only on the
// mt19937_64 engine, which the standard pins down exactly.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t bits();

    // Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi);

    // Uniform on the closed unit disk.
    Complex unit_disk();
    // Uniform on the unit circle.
    Complex phase();
    // +1 or -1.
    double sign();

private:
    std::mt19937_64 engine_;
};

}  // namespace permafinetti
