#pragma once

// Deterministic sampling. All randomized routines take a SeededRng explicitly
// (no global state), and doubles are derived from the raw 64-bit stream with
// a fixed construction so identical seeds give identical points everywhere.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "symap/errors.hpp"

namespace symap {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1), 53-bit resolution, independent of any library
    // distribution implementation.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::complex<double> unit_phase() {
        const double t = 6.283185307179586476925286766559 * uniform01();
        return {std::cos(t), std::sin(t)};
    }

private:
    std::mt19937_64 gen_;
};

// Complex point with each real coordinate uniform in [-half_width, half_width].
inline std::vector<std::complex<double>> sample_box(SeededRng& rng, int n, double half_width) {
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
    for (auto& w : z) {
        const double re = rng.uniform(-half_width, half_width);
        const double im = rng.uniform(-half_width, half_width);
        w = {re, im};
    }
    return z;
}

// Complex point uniform in the ball sum |z_j|^2 < radius^2 (rejection from
// the enclosing box; acceptance is bounded below for the dimensions used).
inline std::vector<std::complex<double>> sample_ball(SeededRng& rng, int n, double radius) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        auto z = sample_box(rng, n, radius);
        double s = 0.0;
        for (const auto& w : z) s += std::norm(w);
        if (s < radius * radius) return z;
    }
    throw NumericalError("sample_ball: rejection sampling failed");
}

// Decorate radial coordinates with independent uniform phases.
inline std::vector<std::complex<double>> with_phases(SeededRng& rng,
                                                     const std::vector<double>& x) {
    std::vector<std::complex<double>> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < 0.0) throw DomainError("with_phases: negative radial coordinate");
        z[j] = std::sqrt(x[j]) * rng.unit_phase();
    }
    return z;
}

} // namespace symap
