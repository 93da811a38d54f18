#include "spinrecon/parent_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "spinrecon/rng.hpp"

namespace spinrecon {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_cap(SpinLabel spin) {
    if (spin.two_s > kMaxParentTwoS)
        throw DimensionTooLarge("parent space capped at 2s <= 12");
}

Eigen::Matrix2cd pauli(Axis axis) {
    Eigen::Matrix2cd s;
    switch (axis) {
        case Axis::X: s << 0, 1, 1, 0; break;
        case Axis::Y: s << 0, -kI, kI, 0; break;
        case Axis::Z: s << 1, 0, 0, -1; break;
    }
    return s;
}

// exp(i alpha sigma_k / 2); entire in alpha.
Eigen::Matrix2cd half_rotation(Axis axis, Complex alpha) {
    return std::cos(alpha / 2.0) * Eigen::Matrix2cd::Identity() +
           kI * std::sin(alpha / 2.0) * pauli(axis);
}

// Applies a 2x2 operator to factor r (1-based) of the full vector.
void apply_factor_op(Vector& v, int two_s, int r, const Eigen::Matrix2cd& u) {
    const std::uint64_t mask = 1ULL << (two_s - r);  // set bit = sigma +1
    const std::uint64_t dim = v.size();
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (!(b & mask)) continue;
        const Complex plus = v[b];
        const Complex minus = v[b ^ mask];
        v[b] = u(0, 0) * plus + u(0, 1) * minus;
        v[b ^ mask] = u(1, 0) * plus + u(1, 1) * minus;
    }
}

std::vector<Root> roots_of_factors(const ParentState& parent) {
    std::vector<Root> roots;
    for (const auto& f : parent.factors) {
        if (std::abs(f[0]) < 1e-12)
            roots.push_back(Root::inf());
        else
            roots.push_back(Root::finite(f[1] / f[0]));
    }
    return roots;
}

}  // namespace

SymmetricEmbedding symmetric_embedding(SpinLabel spin) {
    check_cap(spin);
    const int two_s = spin.two_s;
    const std::uint64_t dim = 1ULL << two_s;
    Matrix basis = Matrix::Zero(dim, spin.dim());
    for (int col = 0; col < spin.dim(); ++col) {
        const int ones = two_s - col;  // popcount giving sigma-sum 2 mu3
        double binom = 1.0;
        for (int i = 1; i <= col; ++i)
            binom *= static_cast<double>(two_s - col + i) / i;
        const double norm = 1.0 / std::sqrt(binom);  // N^s_{mu3}
        for (std::uint64_t b = 0; b < dim; ++b)
            if (std::popcount(b) == ones) basis(b, col) = norm;
    }
    return SymmetricEmbedding{spin, std::move(basis)};
}

ParentState parent_from_roots(const RootSet& rootset, std::vector<double> kappas) {
    const int two_s = rootset.spin.two_s;
    if (kappas.empty()) kappas.assign(two_s, 0.0);
    if (static_cast<int>(kappas.size()) != two_s)
        throw InvalidArity("need one phase per factor");
    if (two_s > 0) {
        double sum = 0.0;
        for (int r = 0; r + 1 < two_s; ++r) sum += kappas[r];
        kappas.back() = std::fmod(-sum, 2.0 * std::numbers::pi);
        if (kappas.back() < 0.0) kappas.back() += 2.0 * std::numbers::pi;
    }
    ParentState parent{rootset.spin, {}, kappas};
    for (int r = 0; r < two_s; ++r)
        parent.factors.push_back(std::exp(kI * kappas[r]) *
                                 spinor_from_root(rootset.roots[r]));
    return parent;
}

Vector parent_vector(const ParentState& parent) {
    check_cap(parent.spin);
    const int two_s = parent.spin.two_s;
    const std::uint64_t dim = 1ULL << two_s;
    Vector v(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        Complex prod = 1.0;
        for (int r = 1; r <= two_s; ++r) {
            const bool plus = b & (1ULL << (two_s - r));
            prod *= parent.factors[r - 1][plus ? 0 : 1];
        }
        v[b] = prod;
    }
    return v;
}

std::pair<PureState, double> daughter_of(const ParentState& parent) {
    const SymmetricEmbedding emb = symmetric_embedding(parent.spin);
    const Vector proj = emb.basis.adjoint() * parent_vector(parent);
    const double n_psi = proj.norm();
    if (n_psi < 1e-13)
        throw OrthogonalToSymmetric("parent has no symmetric component");
    return {PureState::from_amplitudes(parent.spin, proj), n_psi};
}

Complex tensor_expectation(const ParentState& parent, Axis axis, Complex alpha) {
    check_cap(parent.spin);
    const Vector psi = parent_vector(parent);
    Vector rotated = psi;
    const Eigen::Matrix2cd u = half_rotation(axis, alpha);
    for (int r = 1; r <= parent.spin.two_s; ++r)
        apply_factor_op(rotated, parent.spin.two_s, r, u);
    return psi.dot(rotated);  // Eigen's dot conjugates the left argument
}

Complex tensor_expectation_product(const ParentState& parent, Axis axis,
                                   Complex alpha) {
    const Eigen::Matrix2cd u = half_rotation(axis, alpha);
    Complex m = 1.0;
    for (const auto& f : parent.factors) m *= f.dot(u * f);
    return m;
}

bool equivalence_check(const ParentState& a, const ParentState& b, double tol) {
    if (a.spin != b.spin) throw SpinMismatch("parents of unequal spins");
    const RootSet ra = RootSet::from_roots(a.spin, roots_of_factors(a));
    const RootSet rb = RootSet::from_roots(b.spin, roots_of_factors(b));
    return rootsets_equal(ra, rb, tol);
}

std::uint64_t parent_count(const RootSet& rootset) {
    const int n = rootset.spin.two_s;
    if (n > 20) throw DimensionTooLarge("(2s)! exceeds 64-bit range");
    // Multiplicities of equal roots in the canonical sorted order.
    std::vector<int> mult;
    for (int i = 0; i < n; ++i) {
        const bool same =
            i > 0 && rootset.roots[i].is_inf == rootset.roots[i - 1].is_inf &&
            (rootset.roots[i].is_inf ||
             std::abs(rootset.roots[i].z - rootset.roots[i - 1].z) <= 1e-8);
        if (same)
            ++mult.back();
        else
            mult.push_back(1);
    }
    std::uint64_t count = 1;
    int placed = 0;
    for (int m : mult) {
        // count *= C(placed + m, m)
        for (int i = 1; i <= m; ++i) {
            ++placed;
            count = count * placed / i;  // exact: running product of binomials
        }
    }
    return count;
}

CertificateReport certify_uniqueness_argument(const PureState& state, int trials,
                                              std::uint64_t seed,
                                              const CertificateOptions& opts) {
    check_cap(state.spin);
    const int two_s = state.spin.two_s;
    const RootSet roots = roots_from_state(state);
    const ParentState parent = parent_from_roots(roots);
    constexpr Axis kAxes[] = {Axis::X, Axis::Y, Axis::Z};

    std::vector<double> alpha_grid(opts.grid_points);
    for (int g = 0; g < opts.grid_points; ++g)
        alpha_grid[g] = 4.0 * std::numbers::pi * g / opts.grid_points;

    // Reference expectation functions of the original parent.
    std::vector<std::vector<Complex>> m_ref(3);
    for (int k = 0; k < 3; ++k)
        for (double alpha : alpha_grid)
            m_ref[k].push_back(tensor_expectation_product(parent, kAxes[k], alpha));

    CertificateReport report;

    // (a) W_k leaves <Psi|U_k(alpha)|Psi> invariant.
    double err_phase = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, t));
        for (int k = 0; k < 3; ++k) {
            ParentState twisted = parent;
            for (auto& f : twisted.factors) {
                const double angle = rng.uniform(0.0, 4.0 * std::numbers::pi);
                f = half_rotation(kAxes[k], angle) * f;
            }
            for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
                const Complex m = tensor_expectation_product(twisted, kAxes[k],
                                                             alpha_grid[g]);
                err_phase = std::max(err_phase, std::abs(m - m_ref[k][g]));
            }
        }
    }
    report.checks.push_back(
        {"phase_ops_preserve_expectations", err_phase, err_phase < opts.tol});

    // Product form vs full tensor contraction.
    double err_contract = 0.0;
    for (int k = 0; k < 3; ++k) {
        for (double alpha : {0.0, 0.7, 2.9, 5.3}) {
            const Complex a = tensor_expectation(parent, kAxes[k], alpha);
            const Complex b = tensor_expectation_product(parent, kAxes[k], alpha);
            err_contract = std::max(err_contract, std::abs(a - b));
        }
    }
    report.checks.push_back(
        {"product_matches_contraction", err_contract, err_contract < opts.tol});

    // (b) Matching expectations on the grid must imply same equivalence
    // class; search random perturbed parents for counterexamples.
    int counterexamples = 0;
    double closest_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < opts.perturbed_parents; ++t) {
        Rng rng(Rng::derive(seed ^ 0x5eedULL, t));
        std::vector<Root> perturbed;
        for (const auto& r : roots.roots) {
            if (r.is_inf) {
                perturbed.push_back(r);
                continue;
            }
            const double scale = (t % 2 == 0) ? 1e-3 : 1.0;
            perturbed.push_back(Root::finite(r.z + scale * rng.complex_normal()));
        }
        const RootSet rs = RootSet::from_roots(state.spin, std::move(perturbed));
        const ParentState other = parent_from_roots(rs);
        double gap = 0.0;
        for (int k = 0; k < 3; ++k)
            for (std::size_t g = 0; g < alpha_grid.size(); ++g)
                gap = std::max(gap, std::abs(tensor_expectation_product(
                                                 other, kAxes[k], alpha_grid[g]) -
                                             m_ref[k][g]));
        closest_gap = std::min(closest_gap, gap);
        if (gap < opts.tol && !equivalence_check(other, parent, 1e-6))
            ++counterexamples;
    }
    report.checks.push_back({"no_counterexample_parents",
                             static_cast<double>(counterexamples),
                             counterexamples == 0});

    // Recombination ambiguity: alternative equivalence classes consistent
    // with the unordered ensembles.
    if (two_s >= 1) {
        const GenericityReport gen = classify_genericity(state);
        for (const auto& alt : gen.consistent_rootsets) {
            if (rootsets_equal(alt, roots, 1e-6)) continue;
            report.equivalence_class_escape = true;
            const ParentState alt_parent = parent_from_roots(alt);
            double gap = 0.0;
            for (int k = 0; k < 3; ++k)
                for (std::size_t g = 0; g < alpha_grid.size(); ++g)
                    gap = std::max(gap,
                                   std::abs(tensor_expectation_product(
                                                alt_parent, kAxes[k], alpha_grid[g]) -
                                            m_ref[k][g]));
            report.alternative_rootsets.push_back(alt);
            report.alternative_expectation_gaps.push_back(gap);
        }
    }

    report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CertificateCheck& c) { return c.pass; });
    return report;
}

}  // namespace spinrecon
