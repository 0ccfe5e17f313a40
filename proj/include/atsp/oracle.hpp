#ifndef ATSP_ORACLE_HPP
#define ATSP_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

enum class OracleMethod { Exhaustive, HeldKarp };

struct OracleResult {
    double value = 0.0; // +inf when no Hamiltonian cycle exists
    std::vector<std::size_t> tour;
    OracleMethod method = OracleMethod::Exhaustive;
};

/// Exact optimum over all (n-1)! directed tours; n <= 10. Throws TooLarge.
OracleResult exhaustive_atsp(const Instance& inst);

/// Subset dynamic program over (set, endpoint) states; n <= 16. Throws TooLarge.
OracleResult held_karp(const Instance& inst);

} // namespace atsp

#endif
