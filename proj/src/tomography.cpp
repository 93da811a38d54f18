#include "spinrecon/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "spinrecon/rng.hpp"

namespace spinrecon {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPinnedProbability = 1e-14;

double default_accept_tol(const DataSet& dataset) {
    if (!dataset.shots) return 1e-18;
    const auto& s = *dataset.shots;
    return 3.0 / static_cast<double>(std::min({s[0], s[1], s[2]}));
}

Eigen::VectorXd multinomial_frequencies(const Eigen::VectorXd& p, std::int64_t n,
                                        Rng& rng) {
    const int bins = static_cast<int>(p.size());
    Eigen::VectorXd cdf(bins);
    double acc = 0.0;
    for (int i = 0; i < bins; ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    cdf[bins - 1] = std::max(cdf[bins - 1], 1.0);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(bins);
    for (std::int64_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        int lo = 0, hi = bins - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (u < cdf[mid])
                hi = mid;
            else
                lo = mid + 1;
        }
        counts[lo] += 1.0;
    }
    return counts / static_cast<double>(n);
}

// Phase-retrieval working set: moduli fixed in the first axis's eigenbasis,
// free phases optimized against the other two intensity vectors.
struct PhaseProblem {
    SpinLabel spin;
    Eigen::VectorXd moduli;          // sqrt(p) along the first axis
    std::vector<int> free_indices;   // entries carrying a free phase
    int anchor = 0;                  // largest-p entry, phase pinned to 0
    Matrix b0;                       // first-axis basis (z-basis columns)
    std::array<Matrix, 2> cross;     // B_k^dagger B_0 for the other axes
    std::array<Eigen::VectorXd, 2> target;

    explicit PhaseProblem(const DataSet& d) : spin(d.spin) {
        moduli = d.p[0].cwiseMax(0.0).cwiseSqrt();
        d.p[0].maxCoeff(&anchor);
        for (int i = 0; i < d.p[0].size(); ++i)
            if (i != anchor && d.p[0][i] > kPinnedProbability)
                free_indices.push_back(i);
        b0 = basis_matrix(spin, d.axes.axes[0]);
        for (int t = 0; t < 2; ++t) {
            cross[t] = basis_matrix(spin, d.axes.axes[t + 1]).adjoint() * b0;
            target[t] = d.p[t + 1];
        }
    }

    int nfree() const { return static_cast<int>(free_indices.size()); }

    Vector coefficients(const Eigen::VectorXd& phases) const {
        Vector c = Vector::Zero(spin.dim());
        c[anchor] = moduli[anchor];
        for (int j = 0; j < nfree(); ++j)
            c[free_indices[j]] = moduli[free_indices[j]] * std::exp(kI * phases[j]);
        return c;
    }

    // Residual vector over the two cross axes and its Jacobian in the phases.
    void evaluate(const Eigen::VectorXd& phases, Eigen::VectorXd& r,
                  Eigen::MatrixXd* jac) const {
        const Vector c = coefficients(phases);
        const int d = spin.dim();
        r.resize(2 * d);
        if (jac) jac->resize(2 * d, nfree());
        for (int t = 0; t < 2; ++t) {
            const Vector amps = cross[t] * c;
            for (int m = 0; m < d; ++m) {
                r[t * d + m] = std::norm(amps[m]) - target[t][m];
                if (!jac) continue;
                for (int j = 0; j < nfree(); ++j) {
                    const int col = free_indices[j];
                    const Complex dv = kI * cross[t](m, col) * c[col];
                    (*jac)(t * d + m, j) = 2.0 * (std::conj(amps[m]) * dv).real();
                }
            }
        }
    }

    double cost(const Eigen::VectorXd& phases) const {
        Eigen::VectorXd r;
        evaluate(phases, r, nullptr);
        return r.squaredNorm();
    }

    // Levenberg-Marquardt descent to a local minimum.
    Eigen::VectorXd minimize(Eigen::VectorXd phases) const {
        if (nfree() == 0) return phases;
        Eigen::VectorXd r;
        Eigen::MatrixXd jac;
        evaluate(phases, r, &jac);
        double cost_now = r.squaredNorm();
        double lambda = 1e-3;
        for (int iter = 0; iter < 300; ++iter) {
            const Eigen::VectorXd grad = 2.0 * jac.transpose() * r;
            // Keep descending through nearly-flat (degenerate) minima: the
            // gradient decays much faster than the cost there.
            if (grad.norm() < 1e-16) break;
            const Eigen::MatrixXd h = jac.transpose() * jac;
            bool stepped = false;
            for (int attempt = 0; attempt < 40; ++attempt) {
                Eigen::MatrixXd damped = h;
                damped.diagonal().array() += lambda;
                const Eigen::VectorXd step =
                    damped.ldlt().solve(jac.transpose() * r);
                const Eigen::VectorXd trial = phases - step;
                const double cost_trial = cost(trial);
                if (cost_trial < cost_now) {
                    phases = trial;
                    cost_now = cost_trial;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    stepped = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!stepped) break;
            evaluate(phases, r, &jac);
        }
        return phases;
    }

    PureState state_at(const Eigen::VectorXd& phases) const {
        return PureState::from_amplitudes(spin, b0 * coefficients(phases));
    }
};

struct Minimum {
    PureState state;
    double residual;
};

void merge_minimum(std::vector<Minimum>& minima, Minimum m, double dedup_tol) {
    for (auto& existing : minima) {
        if (fidelity(existing.state, m.state) >= 1.0 - dedup_tol) {
            if (m.residual < existing.residual) existing = std::move(m);
            return;
        }
    }
    minima.push_back(std::move(m));
}

int thread_count(const ReconstructConfig& config) {
    if (config.threads > 0) return config.threads;
    return 1;
}

}  // namespace

AxisTriple validate_axes(const Direction& a, const Direction& b, const Direction& c,
                         double volume_tol) {
    const double triple = a.n.dot(b.n.cross(c.n));
    if (std::abs(triple) < volume_tol)
        throw CoplanarAxes("measurement axes do not span a volume");
    return AxisTriple{{a, b, c}, triple};
}

DataSet simulate_dataset(const PureState& state, const AxisTriple& axes,
                         std::optional<std::array<std::int64_t, 3>> shots,
                         std::uint64_t seed) {
    if (shots)
        for (const auto n : *shots)
            if (n <= 0) throw InvalidShotCount("shot counts must be positive");
    DataSet d{state.spin, axes, {}, shots};
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd p = probabilities(state, axes.axes[k]).p;
        if (shots) {
            Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
            p = multinomial_frequencies(p, (*shots)[k], rng);
        }
        d.p[k] = std::move(p);
    }
    return d;
}

double residual(const PureState& state, const DataSet& dataset) {
    if (state.spin != dataset.spin)
        throw SpinMismatch("state and dataset spins differ");
    double r = 0.0;
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd p = probabilities(state, dataset.axes.axes[k]).p;
        r += (p - dataset.p[k]).squaredNorm();
    }
    return r;
}

ReconstructionResult reconstruct(const DataSet& dataset,
                                 const ReconstructConfig& config) {
    const PhaseProblem problem(dataset);
    const double accept_tol =
        config.accept_tol ? *config.accept_tol : default_accept_tol(dataset);

    std::vector<Minimum> minima;
    int restarts_used = 0;
    const int max_rounds = dataset.shots ? 1 : 20;

    // Each restart is an independent local descent; keep going in batches
    // until something is accepted or the budget runs out.
    for (int round = 0; round < max_rounds; ++round) {
        const int batch = std::max(1, config.restarts);
        std::vector<Minimum> batch_minima(batch, Minimum{PureState{}, 0.0});
        const auto worker = [&](int begin, int end) {
            for (int i = begin; i < end; ++i) {
                const int restart = round * batch + i;
                Rng rng(Rng::derive(config.seed, restart));
                Eigen::VectorXd phases(problem.nfree());
                for (int j = 0; j < phases.size(); ++j)
                    phases[j] = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const Eigen::VectorXd solution = problem.minimize(phases);
                PureState state = problem.state_at(solution);
                const double res = residual(state, dataset);
                batch_minima[i] = Minimum{std::move(state), res};
            }
        };
        const int nthreads = std::min(thread_count(config), batch);
        if (nthreads <= 1) {
            worker(0, batch);
        } else {
            std::vector<std::thread> pool;
            const int chunk = (batch + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t)
                pool.emplace_back(worker, t * chunk,
                                  std::min(batch, (t + 1) * chunk));
            for (auto& th : pool) th.join();
        }
        restarts_used += batch;
        for (auto& m : batch_minima)
            merge_minimum(minima, std::move(m), config.dedup_tol);
        const bool accepted = std::any_of(
            minima.begin(), minima.end(),
            [&](const Minimum& m) { return m.residual <= accept_tol; });
        if (accepted || problem.nfree() == 0) break;
    }

    std::sort(minima.begin(), minima.end(),
              [](const Minimum& a, const Minimum& b) {
                  if (a.residual != b.residual) return a.residual < b.residual;
                  for (int i = 0; i < a.state.amplitudes.size(); ++i) {
                      const Complex ca = a.state.amplitudes[i];
                      const Complex cb = b.state.amplitudes[i];
                      if (ca.real() != cb.real()) return ca.real() < cb.real();
                      if (ca.imag() != cb.imag()) return ca.imag() < cb.imag();
                  }
                  return false;
              });

    ReconstructionResult result;
    result.diagnostics.restarts_used = restarts_used;
    result.diagnostics.accept_tol = accept_tol;
    result.diagnostics.best_residual =
        minima.empty() ? std::numeric_limits<double>::infinity()
                       : minima.front().residual;
    double runner_up = std::numeric_limits<double>::infinity();
    for (const auto& m : minima) {
        if (m.residual <= accept_tol)
            result.candidates.push_back(Candidate{m.state, m.residual, {}});
    }
    if (minima.size() > 1) runner_up = minima[1].residual;

    if (result.candidates.empty()) {
        result.verdict = Verdict::Failed;
    } else if (result.candidates.size() > 1) {
        result.verdict = Verdict::Ambiguous;
    } else {
        result.verdict = Verdict::Unique;
        if (dataset.shots) {
            // Best-effort with noise: demand a clear gap to the runner-up.
            const double best = std::max(result.candidates[0].residual, 1e-300);
            if (runner_up <= 10.0 * best) result.verdict = Verdict::Ambiguous;
        }
    }
    if (!result.candidates.empty() && dataset.spin.two_s >= 1) {
        const auto gen = classify_genericity(result.candidates[0].state);
        result.diagnostics.genericity =
            gen.verdict == Genericity::Generic ? "GENERIC" : "EXCEPTIONAL";
    }
    return result;
}

ConjugatePartnerReport conjugate_partner_check(const PureState& state,
                                               const DataSet& dataset) {
    ConjugatePartnerReport report;
    report.partner =
        PureState::from_amplitudes(state.spin, state.amplitudes.conjugate());
    report.partner_residual = residual(report.partner, dataset);
    const double accept_tol = default_accept_tol(dataset);
    report.is_partner = report.partner_residual <= accept_tol &&
                        fidelity(report.partner, state) < 1.0 - 1e-8;
    const Matrix sy = spin_matrices(state.spin).sy;
    const Vector& psi = state.amplitudes;
    report.sy_expectation = psi.dot(sy * psi).real();
    report.sy_cubed_expectation = psi.dot(sy * (sy * (sy * psi))).real();
    report.odd_sy_moments_vanish = std::abs(report.sy_expectation) < 1e-10 &&
                                   std::abs(report.sy_cubed_expectation) < 1e-10;
    return report;
}

std::vector<Candidate> brute_force_oracle(const DataSet& dataset,
                                          int grid_points_per_phase) {
    if (dataset.spin.two_s > 2)
        throw OracleTooExpensive("grid oracle supports 2s <= 2 only");
    if (dataset.shots)
        throw Error("grid oracle requires exact probabilities");
    const PhaseProblem problem(dataset);
    const double accept_tol = default_accept_tol(dataset);
    const int n = grid_points_per_phase;
    const int nfree = problem.nfree();

    std::vector<Minimum> minima;
    const auto consider = [&](Eigen::VectorXd phases) {
        const Eigen::VectorXd solution = problem.minimize(std::move(phases));
        PureState state = problem.state_at(solution);
        const double res = residual(state, dataset);
        if (res <= accept_tol)
            merge_minimum(minima, Minimum{std::move(state), res}, 1e-8);
    };

    if (nfree == 0) {
        consider(Eigen::VectorXd::Zero(0));
    } else if (nfree == 1) {
        std::vector<double> cost(n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd phases(1);
            phases[0] = 2.0 * std::numbers::pi * i / n;
            cost[i] = problem.cost(phases);
        }
        for (int i = 0; i < n; ++i) {
            if (cost[i] <= cost[(i + n - 1) % n] && cost[i] <= cost[(i + 1) % n]) {
                Eigen::VectorXd phases(1);
                phases[0] = 2.0 * std::numbers::pi * i / n;
                consider(phases);
            }
        }
    } else {
        Eigen::MatrixXd cost(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Eigen::VectorXd phases(2);
                phases[0] = 2.0 * std::numbers::pi * i / n;
                phases[1] = 2.0 * std::numbers::pi * j / n;
                cost(i, j) = problem.cost(phases);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double c = cost(i, j);
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        if (cost((i + di + n) % n, (j + dj + n) % n) < c) {
                            is_min = false;
                            break;
                        }
                    }
                if (!is_min) continue;
                Eigen::VectorXd phases(2);
                phases[0] = 2.0 * std::numbers::pi * i / n;
                phases[1] = 2.0 * std::numbers::pi * j / n;
                consider(phases);
            }
    }

    std::sort(minima.begin(), minima.end(),
              [](const Minimum& a, const Minimum& b) {
                  return a.residual < b.residual;
              });
    std::vector<Candidate> out;
    for (auto& m : minima) out.push_back(Candidate{std::move(m.state), m.residual, {}});
    return out;
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - lo;
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

std::vector<NoiseSweepRow> noise_sweep(const PureState& state, const AxisTriple& axes,
                                       const std::vector<std::int64_t>& shot_grid,
                                       int repeats, std::uint64_t seed,
                                       const ReconstructConfig& config) {
    std::vector<NoiseSweepRow> rows;
    if (repeats <= 0) return rows;
    for (std::size_t gi = 0; gi < shot_grid.size(); ++gi) {
        const std::int64_t shots = shot_grid[gi];
        std::vector<double> infidelities;
        for (int rep = 0; rep < repeats; ++rep) {
            const std::uint64_t run_seed = Rng::derive(seed, gi * 1000 + rep);
            std::optional<std::array<std::int64_t, 3>> shot_spec;
            if (shots > 0) shot_spec = std::array<std::int64_t, 3>{shots, shots, shots};
            const DataSet d = simulate_dataset(state, axes, shot_spec, run_seed);
            ReconstructConfig cfg = config;
            cfg.seed = Rng::derive(run_seed, 1);
            const ReconstructionResult result = reconstruct(d, cfg);
            double inf = 1.0;
            if (!result.candidates.empty())
                inf = 1.0 - fidelity(result.candidates[0].state, state);
            infidelities.push_back(inf);
        }
        NoiseSweepRow row;
        row.shots = shots;
        row.median_infidelity = quantile(infidelities, 0.5);
        row.q25 = quantile(infidelities, 0.25);
        row.q75 = quantile(infidelities, 0.75);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spinrecon
