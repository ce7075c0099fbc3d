#pragma once

#include <cstdint>
#include <span>

namespace qsem {

// Statevector swap test between two unit vectors of equal power-of-two
// dimension N <= 32 (2 log2 N + 1 qubits).

// Exact probability of measuring the ancilla in |0>: (1 + <a|b>^2) / 2.
double swap_test_exact_p0(std::span<const double> a, std::span<const double> b);

struct SwapTestResult {
    double p0_exact = 0;     // ancilla-0 probability from the statevector
    double p0_sampled = 0;   // fraction of 0 outcomes over the shots
    double estimate = 0;     // 2 * p0_sampled - 1, estimates <a|b>^2
};

SwapTestResult swap_test_sim(std::span<const double> a, std::span<const double> b,
                             std::size_t shots, std::uint64_t seed);

}  // namespace qsem
