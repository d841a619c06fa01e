#pragma once

// Brute-force reference oracles. They share no code with the production
// oracles and exist to check them.

#include "fwsliding/core.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fwsliding::verify {

/// min_i g_i by scanning every vertex e_i.
double simplex_min_by_enumeration(const Point &g);

/// Smallest eigenvalue of sym((G + G^T)/2) by a dense LAPACK-style solver.
double spectrahedron_min_dense(const Point &g, std::size_t n);

/// Cheapest Hamiltonian cycle by enumerating all (n-1)! orders starting at node 0.
double tour_min_by_permutation(const Point &costs, std::size_t nodes);

struct EquivalenceReport {
    long trials = 0;
    long mismatches = 0;
    double worst_error = 0.0;
    std::optional<std::string> first_failure;  ///< offending input, echoed
};

/// Compares the production oracle of `family` ("simplex", "spectrahedron",
/// "hamiltonian") against its brute-force reference on random inputs. A
/// trial passes when the values agree within 1e-8, the vertex is a member
/// of the set, and <g, vertex> reproduces the reported value.
EquivalenceReport lmo_equivalence(const std::string &family, std::size_t size, long trials,
                                  std::uint64_t seed);

inline constexpr double kEquivalenceTol = 1e-8;

}  // namespace fwsliding::verify
