#include "spinrecon/spin_core.hpp"

#include <cmath>
#include <numbers>

#include "spinrecon/rng.hpp"

namespace spinrecon {

namespace {
constexpr Complex kI{0.0, 1.0};
}

PureState PureState::from_amplitudes(SpinLabel spin, Vector amps) {
    if (amps.size() != spin.dim())
        throw InvalidArity("amplitude count does not match 2s+1");
    const double norm = amps.norm();
    if (norm < 1e-13) throw ZeroState("state vector has vanishing norm");
    amps /= norm;

    // Gauge: largest modulus wins, first index (largest mu) on ties.
    int pivot = 0;
    double best = -1.0;
    for (int i = 0; i < amps.size(); ++i) {
        const double m = std::abs(amps[i]);
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    amps *= std::conj(amps[pivot]) / std::abs(amps[pivot]);
    return PureState{spin, std::move(amps)};
}

SpinMatrices spin_matrices(SpinLabel spin) {
    const int d = spin.dim();
    const double s = spin.s();
    Matrix sp = Matrix::Zero(d, d);  // raising operator
    Matrix sz = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double mu = spin.mu(i);
        sz(i, i) = mu;
        if (i > 0) sp(i - 1, i) = std::sqrt(s * (s + 1) - mu * (mu + 1));
    }
    const Matrix sm = sp.adjoint();
    SpinMatrices m;
    m.sx = 0.5 * (sp + sm);
    m.sy = -0.5 * kI * (sp - sm);
    m.sz = std::move(sz);
    return m;
}

Matrix axis_operator(SpinLabel spin, const Direction& axis) {
    const auto m = spin_matrices(spin);
    return axis.n[0] * m.sx + axis.n[1] * m.sy + axis.n[2] * m.sz;
}

Matrix rotation_operator(SpinLabel spin, const Direction& axis, double angle) {
    const int d = spin.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(axis_operator(spin, axis));
    // Eigenvalues of n.S are exactly -s..s; snap them.
    Vector phases(d);
    for (int k = 0; k < d; ++k) {
        const double mu = -spin.s() + k;  // ascending order
        phases[k] = std::exp(kI * angle * mu);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix basis_matrix(SpinLabel spin, const Direction& axis) {
    const double theta = std::acos(std::clamp(axis.n[2], -1.0, 1.0));
    const double phi = (axis.n.head<2>().norm() < 1e-15)
                           ? 0.0
                           : std::atan2(axis.n[1], axis.n[0]);
    const Matrix ry = rotation_operator(spin, Direction::y(), -theta);
    const Matrix rz = rotation_operator(spin, Direction::z(), -phi);
    return rz * ry;
}

std::vector<PureState> basis_states(SpinLabel spin, const Direction& axis) {
    const Matrix b = basis_matrix(spin, axis);
    std::vector<PureState> out;
    out.reserve(spin.dim());
    for (int j = 0; j < spin.dim(); ++j)
        out.push_back(PureState::from_amplitudes(spin, b.col(j)));
    return out;
}

ProbabilityVector probabilities(const PureState& state, const Direction& axis) {
    const Vector amps = basis_matrix(state.spin, axis).adjoint() * state.amplitudes;
    Eigen::VectorXd p = amps.cwiseAbs2();
    return ProbabilityVector{state.spin, axis, std::move(p)};
}

Complex char_function(const ProbabilityVector& probs, double alpha) {
    Complex m = 0.0;
    for (int i = 0; i < probs.p.size(); ++i)
        m += std::exp(kI * probs.spin.mu(i) * alpha) * probs.p[i];
    return m;
}

Complex char_function(const PureState& state, const Direction& axis, double alpha) {
    return char_function(probabilities(state, axis), alpha);
}

std::vector<double> char_function_grid(SpinLabel spin) {
    const int n = spin.dim();
    std::vector<double> grid(n);
    for (int j = 0; j < n; ++j)
        grid[j] = 2.0 * std::numbers::pi * j / n;
    return grid;
}

ProbabilityVector invert_char_function(const std::map<double, Complex>& samples,
                                       SpinLabel spin, const Direction& axis) {
    const int n = spin.dim();
    const auto grid = char_function_grid(spin);
    if (static_cast<int>(samples.size()) != n)
        throw InvalidSampleGrid("expected 2s+1 samples on the canonical grid");
    // std::map iterates keys in ascending order, matching the grid.
    Vector h(n);
    int j = 0;
    for (const auto& [alpha, value] : samples) {
        if (std::abs(alpha - grid[j]) > 1e-9)
            throw InvalidSampleGrid("sample abscissa off the canonical grid");
        h[j] = std::exp(kI * spin.s() * alpha) * value;
        ++j;
    }
    // h_j = sum_k q_k w^{jk} with q_k = p(mu = k - s); invert by DFT.
    Eigen::VectorXd p(n);
    for (int k = 0; k < n; ++k) {
        Complex q = 0.0;
        for (int jj = 0; jj < n; ++jj)
            q += h[jj] * std::exp(-kI * (2.0 * std::numbers::pi * jj * k / n));
        p[n - 1 - k] = q.real() / n;  // index i=0 holds mu=s, i.e. k=2s
    }
    return ProbabilityVector{spin, axis, std::move(p)};
}

PureState apply_phase_polynomial(const PureState& state, const Direction& axis,
                                 const Eigen::VectorXd& chi) {
    if (chi.size() != state.spin.dim())
        throw InvalidPhases("phase sequence length must be 2s+1");
    const Matrix b = basis_matrix(state.spin, axis);
    Vector amps = b.adjoint() * state.amplitudes;
    for (int i = 0; i < amps.size(); ++i) amps[i] *= std::exp(kI * chi[i]);
    return PureState::from_amplitudes(state.spin, b * amps);
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.spin != b.spin) throw SpinMismatch("fidelity of unequal spins");
    return std::clamp(std::abs(a.amplitudes.dot(b.amplitudes)), 0.0, 1.0);
}

PureState random_state(SpinLabel spin, std::uint64_t seed) {
    Rng rng(seed);
    Vector amps(spin.dim());
    for (int i = 0; i < amps.size(); ++i) amps[i] = rng.complex_normal();
    return PureState::from_amplitudes(spin, std::move(amps));
}

PureState time_reversal(const PureState& state) {
    const int d = state.spin.dim();
    Vector out(d);
    for (int i = 0; i < d; ++i) {
        // s - mu_i = i, and -mu_i sits at index 2s - i.
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        out[d - 1 - i] = sign * std::conj(state.amplitudes[i]);
    }
    return PureState::from_amplitudes(state.spin, std::move(out));
}

}  // namespace spinrecon
