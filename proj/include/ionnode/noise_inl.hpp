#pragma once

#include <array>
#include <cmath>

namespace ionnode::noise {

template <class Channel>
double mub_average_fidelity(Channel&& channel) {
    using quantum::Complex;
    using quantum::Ket;
    const double h = 1.0 / std::sqrt(2.0);
    const std::array<std::array<Complex, 2>, 6> states{{
        {Complex{1, 0}, Complex{0, 0}},
        {Complex{0, 0}, Complex{1, 0}},
        {Complex{h, 0}, Complex{h, 0}},
        {Complex{h, 0}, Complex{-h, 0}},
        {Complex{h, 0}, Complex{0, h}},
        {Complex{h, 0}, Complex{0, -h}},
    }};
    double total = 0.0;
    for (const auto& s : states) {
        Ket k(2);
        k << s[0], s[1];
        const auto in = QuantumState::pure({{"q", 2}}, k);
        total += quantum::fidelity_to_pure(channel(in), k);
    }
    return total / 6.0;
}

}  // namespace ionnode::noise
