#pragma once

#include "fwsliding/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fwsliding {

/// Standard simplex {x >= 0, sum x = 1} in R^n. Returns e_i for the lowest
/// index i attaining min g_i.
class SimplexLmo final : public LinearMinimizationOracle {
public:
    explicit SimplexLmo(std::size_t n);

    LmoResult minimize(const Point &g) const override;
    SetId set_id() const override { return {SetKind::Simplex, n_}; }
    std::optional<double> diameter_exact() const override;
    double diameter_bound() const override;

private:
    std::size_t n_;
};

struct EigenPair {
    double value;
    Eigen::VectorXd vector;  ///< unit norm
    double residual;         ///< ||G v - value v||
};

/// Smallest eigenpair of a symmetric matrix. Householder reduction to
/// tridiagonal form, Sturm-sequence bisection for the eigenvalue, inverse
/// iteration for the vector. The start vector of the inverse iteration is
/// derived from a hash of the entries, so identical inputs give identical
/// vectors even for repeated eigenvalues.
///
/// Throws CapExceeded if inverse iteration does not reach
/// residual <= rel_tol * ||G||_inf within `cap` steps.
EigenPair min_eigenpair(const Eigen::MatrixXd &sym, double rel_tol = 1e-9, int cap = 50);

/// Standard spectrahedron {X symmetric, tr X = 1, X psd} over n x n matrices
/// flattened row-major. The minimizer of <G, X> is v v^T for a unit
/// eigenvector v of the smallest eigenvalue of (G + G^T)/2.
class SpectrahedronLmo final : public LinearMinimizationOracle {
public:
    explicit SpectrahedronLmo(std::size_t n, double eig_tol = 1e-9, int eig_cap = 50);

    LmoResult minimize(const Point &g) const override;
    SetId set_id() const override { return {SetKind::Spectrahedron, n_}; }
    std::optional<double> diameter_exact() const override;
    double diameter_bound() const override;

    std::size_t side() const { return n_; }

private:
    std::size_t n_;
    double eig_tol_;
    int eig_cap_;
};

inline constexpr std::size_t kMaxCycleNodes = 16;

/// Coordinate of undirected edge {i, j}, i != j, in the lower-triangular
/// layout: for i > j the index is i (i - 1) / 2 + j.
std::size_t edge_index(std::size_t i, std::size_t j);
std::size_t edge_count(std::size_t nodes);

/// 0/1 incidence vector of the closed tour visiting `order` in sequence.
Point cycle_incidence(const std::vector<std::size_t> &order, std::size_t nodes);

/// True iff p is (within tol) a 0/1 vector whose support is a single cycle
/// through all nodes.
bool is_cycle_vertex(const Point &p, std::size_t nodes, double tol = kDefaultTol);

/// Necessary conditions for membership in the cycle polytope: 0 <= x_e <= 1
/// and every node has weighted degree 2. Used to sanity-check interior
/// iterates, which cannot be decided exactly.
bool satisfies_degree_relaxation(const Point &p, std::size_t nodes, double tol = kDefaultTol);

struct TourResult {
    std::vector<std::size_t> order;  ///< starts at node 0
    double cost;
};

/// Exact minimum-cost Hamiltonian cycle by Held-Karp dynamic programming.
/// Among optimal tours the lexicographically smallest node sequence starting
/// at node 0 is returned.
TourResult held_karp(const Point &edge_costs, std::size_t nodes);

/// Convex hull of the Hamiltonian cycles of the complete graph K_n, 3 <= n <= 16.
class HamiltonianLmo final : public LinearMinimizationOracle {
public:
    explicit HamiltonianLmo(std::size_t nodes);

    LmoResult minimize(const Point &c) const override;
    SetId set_id() const override { return {SetKind::HamiltonianCycles, nodes_}; }
    std::optional<double> diameter_exact() const override;
    double diameter_bound() const override;

    std::size_t nodes() const { return nodes_; }

private:
    std::size_t nodes_;
};

}  // namespace fwsliding
