#pragma once

#include <map>
#include <utility>
#include <vector>

#include "spinrecon/spin_core.hpp"

namespace spinrecon {

enum class Axis { X, Y, Z };

/// A point on the Riemann sphere: a finite stereographic coordinate or
/// the point at infinity.
struct Root {
    bool is_inf = false;
    Complex z{0.0, 0.0};

    static Root inf() { return Root{true, {0.0, 0.0}}; }
    static Root finite(Complex z) { return Root{false, z}; }
};

/// The stellar representation of a pure spin-s state: the multiset of the
/// 2s zeroes of f(z), kept in canonical sorted order (infinities last,
/// then by real part, then imaginary part).
struct RootSet {
    SpinLabel spin;
    std::vector<Root> roots;

    static RootSet from_roots(SpinLabel spin, std::vector<Root> roots);
};

/// The three unordered real ensembles {x_r}, {y_r}, {|z_r|} of a rootset.
/// Roots at infinity appear as +inf markers in all three multisets.
struct EnsembleTriple {
    std::vector<double> xs, ys, mods;  // each sorted ascending
};

enum class Genericity { Generic, Exceptional };

struct GenericityReport {
    Genericity verdict;
    std::vector<RootSet> consistent_rootsets;
    // Index pairs (r, r') with r != r' where x_r = +-y_{r'} within tolerance.
    std::vector<std::pair<int, int>> collisions;
};

/// Zeroes of the Majorana polynomial of `state`; leading coefficients below
/// 1e-12 * max|coefficient| drop the degree and contribute roots at infinity.
RootSet roots_from_state(const PureState& state);

/// Inverse of roots_from_state (up to ray).
PureState state_from_roots(const RootSet& rootset);

/// Finite z -> (1, z)/sqrt(1+|z|^2); infinity -> (0, 1).
Eigen::Vector2cd spinor_from_root(const Root& root);

EnsembleTriple ensembles_from_rootset(const RootSet& rootset);

/// All root multisets consistent with the three ensembles: exhaustive
/// backtracking over bijections pairing xs with ys such that x^2 + y^2
/// matches an unused squared modulus within `tol` (in squared units).
/// Results are deduplicated as multisets.
std::vector<RootSet> recombine(const EnsembleTriple& ens, double tol);

/// Generic iff recombination of the state's root ensembles is unambiguous.
GenericityReport classify_genericity(const PureState& state, double tol = 1e-9);

/// M_k(alpha) = prod_r <Psi^r| exp(i alpha sigma_k / 2) |Psi^r> evaluated
/// from the normalized 2x2 algebra; defined for complex alpha.
Complex product_expectation(const RootSet& rootset, Axis axis, Complex alpha);

/// Per-factor ratios c_{k,r}/(1+|z_r|^2) recovered from samples of M_k on
/// the canonical grid alpha_j = 2 pi j/(2s+1) (the factor zeroes in the
/// complex-alpha plane, located through the e^{i alpha} polynomial form).
std::vector<double> expectation_factor_ratios(const std::map<double, Complex>& samples,
                                              SpinLabel spin);

/// Moduli {|z_r|} recovered from M_z samples on the canonical grid.
std::vector<double> moduli_from_expectation_zeros(const std::map<double, Complex>& samples,
                                                  SpinLabel spin);

/// Multiset equality of rootsets with per-component tolerance.
bool rootsets_equal(const RootSet& a, const RootSet& b, double tol = 1e-8);

}  // namespace spinrecon
