#include "spinrecon/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinrecon {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

bool root_less(const Root& a, const Root& b) {
    if (a.is_inf != b.is_inf) return b.is_inf;
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
}

// 1/N^s_mu = sqrt(C(2s, s+mu)); the binomial is exact in double well
// beyond the supported 2s <= 64.
double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
    return b;
}

// Roots of sum_k c[k] z^k (degree = c.size()-1, leading coefficient
// nonzero) via the companion matrix, with one Newton polish step.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
    const int d = static_cast<int>(c.size()) - 1;
    if (d <= 0) return {};
    if (d == 1) return {-c[0] / c[1]};
    Matrix companion = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Matrix> es(companion);
    std::vector<Complex> roots(es.eigenvalues().data(),
                               es.eigenvalues().data() + d);
    for (auto& z : roots) {
        Complex f = 0.0, df = 0.0;
        for (int k = d; k >= 0; --k) {
            df = df * z + f;
            f = f * z + c[k];
        }
        if (std::abs(df) > 1e-14 * std::abs(f) && std::abs(df) > 0.0) {
            const Complex step = f / df;
            if (std::abs(step) < 1.0) z -= step;
        }
    }
    return roots;
}

}  // namespace

RootSet RootSet::from_roots(SpinLabel spin, std::vector<Root> roots) {
    if (static_cast<int>(roots.size()) != spin.two_s)
        throw InvalidArity("rootset cardinality must equal 2s");
    std::sort(roots.begin(), roots.end(), root_less);
    return RootSet{spin, std::move(roots)};
}

RootSet roots_from_state(const PureState& state) {
    const int two_s = state.spin.two_s;
    if (two_s < 1) throw InvalidArity("roots_from_state needs 2s >= 1");
    // c_{mu+s} = (-1)^{mu+s} psi_mu / N^s_mu; amplitude index i holds mu = s-i.
    std::vector<Complex> c(two_s + 1);
    for (int i = 0; i <= two_s; ++i) {
        const int k = two_s - i;  // mu + s
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        c[k] = sign * state.amplitudes[i] * std::sqrt(binomial(two_s, k));
    }
    double max_mod = 0.0;
    for (const auto& ck : c) max_mod = std::max(max_mod, std::abs(ck));
    if (max_mod == 0.0) throw ZeroState("all polynomial coefficients vanish");
    int degree = two_s;
    while (degree > 0 && std::abs(c[degree]) < 1e-12 * max_mod) --degree;
    c.resize(degree + 1);

    std::vector<Root> roots;
    roots.reserve(two_s);
    for (const auto& z : polynomial_roots(c)) roots.push_back(Root::finite(z));
    for (int r = degree; r < two_s; ++r) roots.push_back(Root::inf());
    return RootSet::from_roots(state.spin, std::move(roots));
}

PureState state_from_roots(const RootSet& rootset) {
    const int two_s = rootset.spin.two_s;
    if (two_s == 0) return PureState::from_amplitudes(rootset.spin, Vector::Ones(1));
    // Expand prod(z_r - z) over finite roots; infinities suppress the top
    // coefficients (the polynomial degree stays below 2s).
    std::vector<Complex> a{1.0};
    for (const auto& root : rootset.roots) {
        if (root.is_inf) continue;
        std::vector<Complex> next(a.size() + 1, 0.0);
        for (std::size_t k = 0; k < a.size(); ++k) {
            next[k] += root.z * a[k];
            next[k + 1] -= a[k];
        }
        a = std::move(next);
    }
    Vector amps = Vector::Zero(two_s + 1);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const int i = two_s - static_cast<int>(k);
        amps[i] = sign * a[k] / std::sqrt(binomial(two_s, static_cast<int>(k)));
    }
    return PureState::from_amplitudes(rootset.spin, std::move(amps));
}

Eigen::Vector2cd spinor_from_root(const Root& root) {
    if (root.is_inf) return {0.0, 1.0};
    const double norm = std::sqrt(1.0 + std::norm(root.z));
    return Eigen::Vector2cd(1.0 / norm, root.z / norm);
}

EnsembleTriple ensembles_from_rootset(const RootSet& rootset) {
    EnsembleTriple ens;
    for (const auto& root : rootset.roots) {
        if (root.is_inf) {
            ens.xs.push_back(kInf);
            ens.ys.push_back(kInf);
            ens.mods.push_back(kInf);
        } else {
            ens.xs.push_back(root.z.real());
            ens.ys.push_back(root.z.imag());
            ens.mods.push_back(std::abs(root.z));
        }
    }
    std::sort(ens.xs.begin(), ens.xs.end());
    std::sort(ens.ys.begin(), ens.ys.end());
    std::sort(ens.mods.begin(), ens.mods.end());
    return ens;
}

namespace {

struct RecombineSearch {
    const std::vector<double>& xs;
    const std::vector<double>& ys;
    const std::vector<double>& mods2;  // squared moduli
    double tol;
    std::vector<bool> y_used, m_used;
    std::vector<Complex> current;
    std::vector<std::vector<Complex>> found;

    void run(std::size_t xi) {
        if (xi == xs.size()) {
            found.push_back(current);
            return;
        }
        const double x = xs[xi];
        for (std::size_t yj = 0; yj < ys.size(); ++yj) {
            if (y_used[yj]) continue;
            // Equal y values explore identical branches; skip repeats.
            if (yj > 0 && !y_used[yj - 1] && ys[yj] == ys[yj - 1]) continue;
            const double m2 = x * x + ys[yj] * ys[yj];
            for (std::size_t mk = 0; mk < mods2.size(); ++mk) {
                if (m_used[mk]) continue;
                if (mk > 0 && !m_used[mk - 1] && mods2[mk] == mods2[mk - 1]) continue;
                if (std::abs(mods2[mk] - m2) > tol) continue;
                y_used[yj] = m_used[mk] = true;
                current.push_back({x, ys[yj]});
                run(xi + 1);
                current.pop_back();
                y_used[yj] = m_used[mk] = false;
            }
        }
    }
};

}  // namespace

std::vector<RootSet> recombine(const EnsembleTriple& ens, double tol) {
    const std::size_t n = ens.xs.size();
    if (ens.ys.size() != n || ens.mods.size() != n)
        throw InvalidArity("ensemble multisets must have equal cardinality");
    const auto is_inf = [](double v) { return std::isinf(v); };
    const auto n_inf_x = std::count_if(ens.xs.begin(), ens.xs.end(), is_inf);
    const auto n_inf_y = std::count_if(ens.ys.begin(), ens.ys.end(), is_inf);
    const auto n_inf_m = std::count_if(ens.mods.begin(), ens.mods.end(), is_inf);
    if (n_inf_x != n_inf_y || n_inf_x != n_inf_m)
        throw EmptyRecombination("inconsistent infinity markers");

    std::vector<double> xs, ys, mods2;
    for (double v : ens.xs)
        if (!is_inf(v)) xs.push_back(v);
    for (double v : ens.ys)
        if (!is_inf(v)) ys.push_back(v);
    for (double v : ens.mods)
        if (!is_inf(v)) mods2.push_back(v * v);

    RecombineSearch search{xs, ys, mods2, tol,
                           std::vector<bool>(xs.size(), false),
                           std::vector<bool>(xs.size(), false),
                           {}, {}};
    search.run(0);
    if (search.found.empty())
        throw EmptyRecombination("no pairing satisfies the modulus constraints");

    const SpinLabel spin{static_cast<int>(n)};
    std::vector<RootSet> results;
    for (const auto& zs : search.found) {
        std::vector<Root> roots;
        for (const auto& z : zs) roots.push_back(Root::finite(z));
        for (std::size_t r = 0; r < n - zs.size(); ++r) roots.push_back(Root::inf());
        RootSet rs = RootSet::from_roots(spin, std::move(roots));
        const bool dup = std::any_of(results.begin(), results.end(),
                                     [&](const RootSet& other) {
                                         return rootsets_equal(rs, other);
                                     });
        if (!dup) results.push_back(std::move(rs));
    }
    return results;
}

GenericityReport classify_genericity(const PureState& state, double tol) {
    const RootSet roots = roots_from_state(state);
    const EnsembleTriple ens = ensembles_from_rootset(roots);
    double max_mod2 = 0.0;
    for (double m : ens.mods)
        if (!std::isinf(m)) max_mod2 = std::max(max_mod2, m * m);
    const double scaled = tol * (1.0 + max_mod2);

    GenericityReport report;
    report.consistent_rootsets = recombine(ens, scaled);
    report.verdict = report.consistent_rootsets.size() == 1
                         ? Genericity::Generic
                         : Genericity::Exceptional;
    const int n = static_cast<int>(ens.xs.size());
    for (int r = 0; r < n; ++r) {
        for (int rp = 0; rp < n; ++rp) {
            if (r == rp) continue;
            if (std::isinf(ens.xs[r]) || std::isinf(ens.ys[rp])) continue;
            const double d = std::min(std::abs(ens.xs[r] - ens.ys[rp]),
                                      std::abs(ens.xs[r] + ens.ys[rp]));
            if (d <= scaled) report.collisions.emplace_back(r, rp);
        }
    }
    return report;
}

Complex product_expectation(const RootSet& rootset, Axis axis, Complex alpha) {
    const Complex c = std::cos(alpha / 2.0);
    const Complex is = kI * std::sin(alpha / 2.0);
    Complex m = 1.0;
    for (const auto& root : rootset.roots) {
        const Eigen::Vector2cd psi = spinor_from_root(root);
        Complex factor;
        switch (axis) {
            case Axis::X:
                factor = c * (std::norm(psi[0]) + std::norm(psi[1])) +
                         is * 2.0 * (std::conj(psi[0]) * psi[1]).real();
                break;
            case Axis::Y:
                factor = c * (std::norm(psi[0]) + std::norm(psi[1])) +
                         is * 2.0 * (std::conj(psi[0]) * psi[1]).imag();
                break;
            case Axis::Z:
                factor = c * (std::norm(psi[0]) + std::norm(psi[1])) +
                         is * (std::norm(psi[0]) - std::norm(psi[1]));
                break;
        }
        m *= factor;
    }
    return m;
}

std::vector<double> expectation_factor_ratios(const std::map<double, Complex>& samples,
                                              SpinLabel spin) {
    const int n = spin.dim();
    const int two_s = spin.two_s;
    const auto grid = char_function_grid(spin);
    if (static_cast<int>(samples.size()) != n)
        throw InvalidSampleGrid("expected 2s+1 samples on the canonical grid");
    // e^{i s alpha} M(alpha) = prod_r [(1+nu_r) u + (1-nu_r)]/2 with
    // u = e^{i alpha} and nu_r the per-factor Bloch ratio; recover the
    // polynomial coefficients by DFT and read nu_r off its zeroes.
    Vector h(n);
    int j = 0;
    for (const auto& [alpha, value] : samples) {
        if (std::abs(alpha - grid[j]) > 1e-9)
            throw InvalidSampleGrid("sample abscissa off the canonical grid");
        h[j] = std::exp(kI * spin.s() * alpha) * value;
        ++j;
    }
    std::vector<Complex> q(n);
    double max_mod = 0.0;
    for (int k = 0; k < n; ++k) {
        Complex coeff = 0.0;
        for (int jj = 0; jj < n; ++jj)
            coeff += h[jj] * std::exp(-kI * (2.0 * std::numbers::pi * jj * k / n));
        q[k] = coeff / static_cast<double>(n);
        max_mod = std::max(max_mod, std::abs(q[k]));
    }
    if (max_mod == 0.0 || std::abs(q[two_s]) < 1e-10 * max_mod)
        throw InvalidSampleGrid("degenerate fit: leading coefficient vanishes");

    std::vector<double> ratios;
    for (const Complex& u : polynomial_roots(q)) {
        const Complex nu = (1.0 + u) / (1.0 - u);
        ratios.push_back(nu.real());
    }
    std::sort(ratios.begin(), ratios.end());
    return ratios;
}

std::vector<double> moduli_from_expectation_zeros(const std::map<double, Complex>& samples,
                                                  SpinLabel spin) {
    // Along z: nu_r = (1 - |z_r|^2)/(1 + |z_r|^2).
    std::vector<double> mods;
    for (double nu : expectation_factor_ratios(samples, spin)) {
        const double m2 = std::max(0.0, (1.0 - nu) / (1.0 + nu));
        mods.push_back(std::sqrt(m2));
    }
    std::sort(mods.begin(), mods.end());
    return mods;
}

bool rootsets_equal(const RootSet& a, const RootSet& b, double tol) {
    if (a.roots.size() != b.roots.size()) return false;
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
        const Root& ra = a.roots[i];
        const Root& rb = b.roots[i];
        if (ra.is_inf != rb.is_inf) return false;
        if (!ra.is_inf && std::abs(ra.z - rb.z) > tol) return false;
    }
    return true;
}

}  // namespace spinrecon
