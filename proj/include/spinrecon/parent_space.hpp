#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinrecon/majorana.hpp"
#include "spinrecon/spin_core.hpp"

namespace spinrecon {

inline constexpr int kMaxParentTwoS = 12;  // 4096-dimensional cap

/// Product state in the 2^{2s}-dimensional tensor space: 2s normalized
/// two-component factors plus per-factor phases with product 1.
struct ParentState {
    SpinLabel spin;
    std::vector<Eigen::Vector2cd> factors;
    std::vector<double> kappas;
};

/// Columns are the symmetrized basis vectors |s, mu3>, ordered mu3 = s..-s.
/// Product basis index b selects sigma_r = +1 for factor r iff bit
/// (2s - r) of b is set (most significant bit = factor r = 1).
struct SymmetricEmbedding {
    SpinLabel spin;
    Matrix basis;  // 2^{2s} x (2s+1), orthonormal columns
};

SymmetricEmbedding symmetric_embedding(SpinLabel spin);

/// Factors e^{i kappa_r} * spinor(z_r) over the canonically sorted roots;
/// the last phase absorbs the product-1 constraint.
ParentState parent_from_roots(const RootSet& rootset, std::vector<double> kappas = {});

/// The full 2^{2s} coefficient vector of a parent state.
Vector parent_vector(const ParentState& parent);

/// Projection onto the symmetric subspace: the normalized gauge-fixed
/// daughter and the projection norm N_psi > 0.
std::pair<PureState, double> daughter_of(const ParentState& parent);

/// <Psi| (x)_r u_k(alpha) |Psi> via the full tensor contraction.
Complex tensor_expectation(const ParentState& parent, Axis axis, Complex alpha);

/// Same expectation as the product of 2x2 factor expectations.
Complex tensor_expectation_product(const ParentState& parent, Axis axis, Complex alpha);

/// True iff the factor root multisets agree within tol (phases and factor
/// order ignored), i.e. both parents sit in the same equivalence class.
bool equivalence_check(const ParentState& a, const ParentState& b, double tol);

/// Number of distinct factor orderings, (2s)! / prod(multiplicities!).
std::uint64_t parent_count(const RootSet& rootset);

struct CertificateCheck {
    std::string name;
    double max_error = 0.0;
    bool pass = false;
};

struct CertificateReport {
    std::vector<CertificateCheck> checks;
    bool pass = false;
    /// True when the root ensembles recombine into more than one rootset
    /// (the state admits parents in several equivalence classes).
    bool equivalence_class_escape = false;
    std::vector<RootSet> alternative_rootsets;
    /// Max deviation of the alternatives' M_k from the originals on the grid.
    std::vector<double> alternative_expectation_gaps;
};

struct CertificateOptions {
    int grid_points = 32;       // alpha samples on [0, 4 pi)
    double tol = 1e-10;
    int perturbed_parents = 50;  // counterexample search size per trial batch
};

/// Numerical certificate for the uniqueness argument: (a) diagonal phase
/// operators W_k = (x)_r exp(i alpha_{k,r} sigma_k/2) leave the rotation
/// expectations <Psi|U_k(alpha)|Psi> invariant; (b) no sampled parent
/// reproduces all three expectation functions without being in the same
/// equivalence class. Recombination ambiguities are reported as escapes.
CertificateReport certify_uniqueness_argument(const PureState& state, int trials,
                                              std::uint64_t seed,
                                              const CertificateOptions& opts = {});

}  // namespace spinrecon
