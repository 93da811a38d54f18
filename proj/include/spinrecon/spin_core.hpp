#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "spinrecon/errors.hpp"

namespace spinrecon {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kAlgebraTol = 1e-12;   // single algebraic identities
inline constexpr double kPipelineTol = 1e-10;  // composed pipelines

/// Spin magnitude, stored as 2s so half-integer spins stay exact.
struct SpinLabel {
    int two_s = 0;

    int dim() const { return two_s + 1; }
    double s() const { return 0.5 * two_s; }
    // Amplitude index i runs over mu = s, s-1, ..., -s.
    double mu(int i) const { return s() - i; }

    bool operator==(const SpinLabel&) const = default;
};

/// Unit vector in R^3.
struct Direction {
    Eigen::Vector3d n;

    explicit Direction(const Eigen::Vector3d& v) : n(v) {
        const double len = n.norm();
        if (std::abs(len - 1.0) > 1e-6)
            throw InvalidDirection("direction is not unit length");
        n /= len;
    }

    static Direction x() { return Direction({1, 0, 0}); }
    static Direction y() { return Direction({0, 1, 0}); }
    static Direction z() { return Direction({0, 0, 1}); }
};

/// Normalized state vector in the z basis, ordered mu = s..-s, with the
/// global phase fixed so the largest-modulus amplitude (ties broken by
/// largest mu) is real and non-negative.
struct PureState {
    SpinLabel spin;
    Vector amplitudes;

    static PureState from_amplitudes(SpinLabel spin, Vector amps);
};

struct ProbabilityVector {
    SpinLabel spin;
    Direction axis;
    Eigen::VectorXd p;
};

struct SpinMatrices {
    Matrix sx, sy, sz;
};

/// s_x, s_y, s_z in the z basis from the ladder construction;
/// [s_x, s_y] = i s_z holds to machine precision.
SpinMatrices spin_matrices(SpinLabel spin);

/// n . S for a unit direction n.
Matrix axis_operator(SpinLabel spin, const Direction& axis);

/// exp(i * angle * n.S), built by eigendecomposition of the Hermitian
/// generator (eigenvalues snapped to the exact values s..-s).
Matrix rotation_operator(SpinLabel spin, const Direction& axis, double angle);

/// Matrix whose column j is the eigenvector |s, mu_j; n> of n.S with
/// eigenvalue mu_j = s - j. Phase convention: R(theta, phi) =
/// exp(-i phi s_z) exp(-i theta s_y) applied to the z basis, where
/// (theta, phi) are the polar angles of n.
Matrix basis_matrix(SpinLabel spin, const Direction& axis);

/// The columns of basis_matrix as gauge-fixed states.
std::vector<PureState> basis_states(SpinLabel spin, const Direction& axis);

/// p(mu) = |<s,mu;n|psi>|^2.
ProbabilityVector probabilities(const PureState& state, const Direction& axis);

/// m(alpha) = sum_mu e^{i mu alpha} p(mu) = <psi|exp(i alpha n.S)|psi>.
Complex char_function(const PureState& state, const Direction& axis, double alpha);
Complex char_function(const ProbabilityVector& probs, double alpha);

/// Canonical inversion grid alpha_j = 2 pi j / (2s+1), j = 0..2s.
std::vector<double> char_function_grid(SpinLabel spin);

/// Inverts samples of the characteristic function on the canonical grid.
/// Half-integer spins are handled via m~(alpha) = e^{i s alpha} m(alpha),
/// a polynomial of degree 2s in e^{i alpha}.
ProbabilityVector invert_char_function(const std::map<double, Complex>& samples,
                                       SpinLabel spin, const Direction& axis);

/// exp(i chi(n.S)) |psi>, chi given per eigenvalue mu = s..-s. Preserves
/// the probabilities along `axis` exactly.
PureState apply_phase_polynomial(const PureState& state, const Direction& axis,
                                 const Eigen::VectorXd& chi);

/// |<a|b>|, in [0,1]; equals 1 iff same ray.
double fidelity(const PureState& a, const PureState& b);

/// Rotation-invariant random state (complex normal, normalized).
PureState random_state(SpinLabel spin, std::uint64_t seed);

/// T|psi> = sum_mu (-1)^{s-mu} conj(psi_mu) |s,-mu>.
PureState time_reversal(const PureState& state);

}  // namespace spinrecon
