#include "qsem/swap_test.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "qsem/errors.hpp"

namespace qsem {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct SwapState {
    std::size_t n = 0;                // qubits per register
    std::size_t reg_dim = 0;          // N
    std::vector<double> amp;          // [anc][x][y], real statevector
};

// |0>|a>|b>, then H(ancilla), controlled register swap, H(ancilla).
SwapState run_circuit(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("swap test requires equal dimensions");
    const std::size_t dim = a.size();
    if (dim < 2 || dim > 32 || !std::has_single_bit(dim))
        throw DomainError("swap test dimension must be a power of two in [2, 32]");
    auto norm2 = [](std::span<const double> v) {
        double s = 0;
        for (double x : v) s += x * x;
        return s;
    };
    if (std::abs(norm2(a) - 1.0) > 1e-9 || std::abs(norm2(b) - 1.0) > 1e-9)
        throw DomainError("swap test requires unit-norm states");

    SwapState st;
    st.n = static_cast<std::size_t>(std::countr_zero(dim));
    st.reg_dim = dim;
    st.amp.assign(2 * dim * dim, 0.0);
    auto idx = [dim](std::size_t anc, std::size_t x, std::size_t y) {
        return (anc * dim + x) * dim + y;
    };

    // Prepare |0> (x) |a> (x) |b>.
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y) st.amp[idx(0, x, y)] = a[x] * b[y];

    // Hadamard on the ancilla.
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y) {
            const double a0 = st.amp[idx(0, x, y)];
            const double a1 = st.amp[idx(1, x, y)];
            st.amp[idx(0, x, y)] = (a0 + a1) * kInvSqrt2;
            st.amp[idx(1, x, y)] = (a0 - a1) * kInvSqrt2;
        }

    // Controlled swap of the registers (the product of the n per-qubit swaps).
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = x + 1; y < dim; ++y)
            std::swap(st.amp[idx(1, x, y)], st.amp[idx(1, y, x)]);

    // Final Hadamard on the ancilla.
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y) {
            const double a0 = st.amp[idx(0, x, y)];
            const double a1 = st.amp[idx(1, x, y)];
            st.amp[idx(0, x, y)] = (a0 + a1) * kInvSqrt2;
            st.amp[idx(1, x, y)] = (a0 - a1) * kInvSqrt2;
        }
    return st;
}

double ancilla_zero_probability(const SwapState& st) {
    double p0 = 0;
    const std::size_t block = st.reg_dim * st.reg_dim;
    for (std::size_t i = 0; i < block; ++i) p0 += st.amp[i] * st.amp[i];
    return p0;
}

}  // namespace

double swap_test_exact_p0(std::span<const double> a, std::span<const double> b) {
    return ancilla_zero_probability(run_circuit(a, b));
}

SwapTestResult swap_test_sim(std::span<const double> a, std::span<const double> b,
                             std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw DomainError("swap test needs at least one shot");
    SwapTestResult r;
    r.p0_exact = ancilla_zero_probability(run_circuit(a, b));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t zeros = 0;
    for (std::size_t s = 0; s < shots; ++s)
        if (unit(rng) < r.p0_exact) ++zeros;
    r.p0_sampled = static_cast<double>(zeros) / static_cast<double>(shots);
    r.estimate = 2.0 * r.p0_sampled - 1.0;
    return r;
}

}  // namespace qsem
