#pragma once

#include "fwsliding/core.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace fwsliding {

/// f(x) = 1/2 ||A x - b||^2 with A stored in compressed row form.
class QuadraticObjective final : public ObjectiveOracle {
public:
    using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    QuadraticObjective(SparseMatrix a, Eigen::VectorXd b, std::optional<double> lipschitz = std::nullopt);

    std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
    double value(const Point &x) const override;
    Point gradient(const Point &x) const override;
    std::pair<double, Point> value_and_gradient(const Point &x) const override;
    std::optional<double> lipschitz_hint() const override { return lipschitz_; }

    const SparseMatrix &op() const { return a_; }
    const Eigen::VectorXd &rhs() const { return b_; }
    QuadraticObjective with_lipschitz(double l) const { return {a_, b_, l}; }

    /// f(x) = 1/2 ||x||^2 on R^n.
    static QuadraticObjective half_squared_norm(std::size_t n);

private:
    SparseMatrix a_;
    Eigen::VectorXd b_;
    std::optional<double> lipschitz_;
};

enum class Family {
    Spectrahedron,
    Hamiltonian,
    Simplex,
    /// 1/2 ||x||^2 over the simplex; f* = 1/(2n) at the barycenter.
    SimplexNorm,
};

const char *to_string(Family f);
std::optional<Family> parse_family(const std::string &s);

struct InstanceSpec {
    Family family = Family::Simplex;
    long m = 1;
    long n = 1;
    double density = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const InstanceSpec &) const = default;
};

struct Instance {
    InstanceSpec spec;
    QuadraticObjective objective;
    Point planted;       ///< a minimizer
    double f_star;       ///< optimal value
    std::unique_ptr<LinearMinimizationOracle> lmo;
};

/// A: m x n^2 with Bernoulli(density) pattern and standard normal values;
/// planted X* = U diag(s) U^T with U orthogonal (QR of a Gaussian matrix) and
/// s uniform on [0,1) normalized to sum 1; B = A vec(X*).
std::pair<QuadraticObjective, Point> gen_spectrahedron(long m, long n, double density, std::uint64_t seed);

/// A: m x n(n-1)/2 with Bernoulli(density) pattern and uniform [0,1) values;
/// planted 0.8 v1 + 0.2 v2 for cycles v1, v2 from random permutations.
std::pair<QuadraticObjective, Point> gen_hamiltonian(long m, long n, double density, std::uint64_t seed);

/// Dense Gaussian m x n A, planted x* uniform on the simplex.
std::pair<QuadraticObjective, Point> gen_simplex(long m, long n, std::uint64_t seed);

/// Objective, planted minimizer, f* and matching oracle for a spec.
Instance make_instance(const InstanceSpec &spec);

/// lambda_max(A^T A) by power iteration with a deterministic start; stops
/// when the extrapolated error of the Rayleigh quotient is below tol
/// relative. Throws CapExceeded after `cap` iterations.
double estimate_lmin(const QuadraticObjective &obj, double tol = 1e-8, long cap = 100000);

/// Random point of X: a convex combination of a few random oracle vertices
/// (simplex points are sampled uniformly instead).
Point random_feasible_point(const LinearMinimizationOracle &lmo, std::uint64_t seed, std::uint64_t index);

}  // namespace fwsliding
