// Acceptance gate: one pass/fail line per criterion, exit 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "spinrecon/json_io.hpp"
#include "spinrecon/parent_space.hpp"
#include "spinrecon/rng.hpp"
#include "spinrecon/tomography.hpp"

using namespace spinrecon;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%-34s %s  %s\n", name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures;
}

AxisTriple orthogonal_axes() {
    return validate_axes(Direction::x(), Direction::y(), Direction::z());
}

// Fixed non-orthogonal triple with triple product 0.3.
AxisTriple skew_axes() {
    return validate_axes(Direction::x(), Direction::y(),
                         Direction(Eigen::Vector3d(std::sqrt(0.91), 0.0, 0.3)));
}

RootSet make_roots(int two_s, std::vector<Complex> zs) {
    std::vector<Root> roots;
    for (const auto& z : zs) roots.push_back(Root::finite(z));
    return RootSet::from_roots(SpinLabel{two_s}, std::move(roots));
}

// Criteria 1 and 2 share this driver.
void theorem_reproduction(const std::string& name, const AxisTriple& axes,
                          std::uint64_t seed_base) {
    bool pass = true;
    std::string detail;
    int worst_unique = 100;
    for (int two_s = 1; two_s <= 8 && pass; ++two_s) {
        int unique = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::uint64_t seed = seed_base + 1000 * two_s + trial;
            const auto state = random_state(SpinLabel{two_s}, seed);
            const auto d = simulate_dataset(state, axes);
            const auto result = reconstruct(
                d, ReconstructConfig{.seed = seed, .threads = 4});
            const bool ok =
                result.verdict == Verdict::Unique &&
                !result.candidates.empty() &&
                fidelity(result.candidates[0].state, state) >= 1.0 - 1e-6;
            if (ok) {
                ++unique;
                continue;
            }
            const bool exceptional =
                classify_genericity(state).verdict == Genericity::Exceptional;
            const bool conjugate = conjugate_partner_check(state, d).is_partner;
            if (!exceptional && !conjugate) {
                pass = false;
                detail = "unexplained failure at two_s=" +
                         std::to_string(two_s) + " trial " +
                         std::to_string(trial);
                break;
            }
        }
        worst_unique = std::min(worst_unique, unique);
        if (unique < 99 && pass) {
            pass = false;
            detail = "only " + std::to_string(unique) +
                     "/100 unique at two_s=" + std::to_string(two_s);
        }
    }
    if (pass) detail = "worst spin: " + std::to_string(worst_unique) + "/100 unique";
    report(name, pass, detail);
}

void criterion_3_round_trip() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 1.0;
    for (int two_s = 1; two_s <= 25; ++two_s) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto state =
                random_state(SpinLabel{two_s}, 300000 + 1000 * two_s + trial);
            const double f =
                fidelity(state_from_roots(roots_from_state(state)), state);
            worst = std::min(worst, f);
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool pass = worst >= 1.0 - 1e-10 && secs <= 60.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst fidelity %.3e below 1, %.1fs",
                  1.0 - worst, secs);
    report("3 majorana-round-trip", pass, buf);
}

void criterion_4_parent_identities() {
    constexpr Axis kAxes[] = {Axis::X, Axis::Y, Axis::Z};
    double worst = 0.0;
    Rng rng(40404);
    for (int two_s = 1; two_s <= 8; ++two_s) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Complex> zs;
            for (int r = 0; r < two_s; ++r) zs.push_back(rng.complex_normal());
            const auto rs = make_roots(two_s, zs);
            std::vector<double> kappas(two_s);
            for (auto& k : kappas) k = rng.uniform(0.0, 2.0 * kPi);
            const auto parent = parent_from_roots(rs, kappas);

            // Projection relation: the parent projects onto the daughter ray.
            const auto [daughter, n_psi] = daughter_of(parent);
            worst = std::max(worst,
                             1.0 - fidelity(daughter, state_from_roots(rs)));

            // Product form equals the full tensor contraction.
            for (int g = 0; g < 16; ++g) {
                const double alpha = 4.0 * kPi * g / 16.0;
                for (Axis axis : kAxes) {
                    const Complex a = tensor_expectation(parent, axis, alpha);
                    const Complex b =
                        tensor_expectation_product(parent, axis, alpha);
                    worst = std::max(worst, std::abs(a - b));
                }
            }
        }
    }

    // Symmetric projector commutes with every collective rotation U_k(alpha).
    for (int two_s = 1; two_s <= 8; ++two_s) {
        const auto emb = symmetric_embedding(SpinLabel{two_s});
        const Matrix p = emb.basis * emb.basis.adjoint();
        const std::uint64_t dim = 1ULL << two_s;
        for (Axis axis : kAxes) {
            Eigen::Matrix2cd pauli;
            switch (axis) {
                case Axis::X: pauli << 0, 1, 1, 0; break;
                case Axis::Y: pauli << 0, -kI, kI, 0; break;
                case Axis::Z: pauli << 1, 0, 0, -1; break;
            }
            for (int g = 0; g < 16; ++g) {
                const double alpha = 4.0 * kPi * (g + 0.5) / 16.0;
                const Eigen::Matrix2cd u1 =
                    std::cos(alpha / 2.0) * Eigen::Matrix2cd::Identity() +
                    kI * std::sin(alpha / 2.0) * pauli;
                Matrix u = Matrix::Identity(1, 1);
                for (int r = 0; r < two_s; ++r) {
                    Matrix next(u.rows() * 2, u.cols() * 2);
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            next.block(a * u.rows(), b * u.cols(), u.rows(),
                                       u.cols()) = u1(a, b) * u;
                    u = std::move(next);
                }
                worst = std::max(
                    worst, (p * u - u * p).cwiseAbs().maxCoeff());
                (void)dim;
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max deviation %.3e", worst);
    report("4 parent-space-identities", worst < 1e-10, buf);
}

void criterion_5_recombination() {
    const auto unique_rs = make_roots(2, {Complex(1, 2), Complex(3, 4)});
    const auto amb_rs = make_roots(2, {Complex(1, 2), Complex(-1, 4)});
    const auto sets_a = recombine(ensembles_from_rootset(unique_rs), 1e-9);
    const auto sets_b = recombine(ensembles_from_rootset(amb_rs), 1e-9);
    bool pass = sets_a.size() == 1 &&
                rootsets_equal(sets_a[0], unique_rs, 1e-8) &&
                sets_b.size() == 2;
    if (pass) {
        const auto partner = make_roots(2, {Complex(1, 4), Complex(-1, 2)});
        bool found_self = false, found_partner = false;
        for (const auto& rs : sets_b) {
            if (rootsets_equal(rs, amb_rs, 1e-8)) found_self = true;
            if (rootsets_equal(rs, partner, 1e-8)) found_partner = true;
        }
        pass = found_self && found_partner;
    }
    report("5 recombination-ground-truth", pass,
           std::to_string(sets_a.size()) + " and " +
               std::to_string(sets_b.size()) + " consistent rootsets");
}

void criterion_6_oracle_equivalence() {
    bool pass = true;
    std::string detail = "50/50 datasets agree";
    for (int i = 0; i < 50 && pass; ++i) {
        const int two_s = 1 + i % 2;
        const auto state = random_state(SpinLabel{two_s}, 600000 + i);
        const auto d = simulate_dataset(state, orthogonal_axes());
        const auto oracle = brute_force_oracle(d);
        const auto result = reconstruct(
            d, ReconstructConfig{.seed = static_cast<std::uint64_t>(i)});
        if (oracle.size() != result.candidates.size()) {
            pass = false;
            detail = "candidate counts differ on dataset " + std::to_string(i);
            break;
        }
        for (const auto& o : oracle) {
            bool matched = false;
            for (const auto& c : result.candidates)
                if (fidelity(o.state, c.state) >= 1.0 - 1e-8) matched = true;
            if (!matched) {
                pass = false;
                detail = "unmatched oracle candidate on dataset " +
                         std::to_string(i);
            }
        }
    }
    report("6 oracle-equivalence", pass, detail);
}

void criterion_7_algebraic_invariants() {
    double unitarity = 0.0, normalization = 0.0, inversion = 0.0;
    Rng rng(777);
    for (int trial = 0; trial < 1000; ++trial) {
        const int two_s = 1 + static_cast<int>(rng.raw() % 10);
        const SpinLabel spin{two_s};
        Eigen::Vector3d n(rng.normal(), rng.normal(), rng.normal());
        while (n.norm() < 1e-3)
            n = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
        const Direction axis(n.normalized());
        const auto state = random_state(spin, rng.raw());

        const Matrix u = rotation_operator(spin, axis, rng.uniform(-8.0, 8.0));
        unitarity = std::max(unitarity,
                             (u.adjoint() * u -
                              Matrix::Identity(spin.dim(), spin.dim()))
                                 .cwiseAbs()
                                 .maxCoeff());

        const auto probs = probabilities(state, axis);
        normalization = std::max(normalization, std::abs(probs.p.sum() - 1.0));

        std::map<double, Complex> samples;
        for (double alpha : char_function_grid(spin))
            samples[alpha] = char_function(state, axis, alpha);
        const auto recovered = invert_char_function(samples, spin, axis);
        inversion = std::max(inversion,
                             (recovered.p - probs.p).cwiseAbs().maxCoeff());
    }
    const bool pass =
        unitarity < 1e-12 && normalization < 1e-10 && inversion < 1e-10;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "unitarity %.2e, normalization %.2e, inversion %.2e",
                  unitarity, normalization, inversion);
    report("7 algebraic-invariants", pass, buf);
}

void criterion_8_noise_behavior() {
    PureState state = random_state(SpinLabel{2}, 808);
    // The criterion is stated for a generic state; skip ahead if unlucky.
    for (std::uint64_t s = 809;
         classify_genericity(state).verdict != Genericity::Generic; ++s)
        state = random_state(SpinLabel{2}, s);
    const auto rows = noise_sweep(state, orthogonal_axes(),
                                  {100, 1000, 10000, 100000, 0}, 20, 2026,
                                  ReconstructConfig{.restarts = 30});
    bool decreasing = true;
    for (int i = 1; i < 4; ++i)
        if (!(rows[i].median_infidelity < rows[i - 1].median_infidelity))
            decreasing = false;
    const bool exact_ok = rows[4].median_infidelity < 1e-8;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "medians %.2e > %.2e > %.2e > %.2e, exact %.2e",
                  rows[0].median_infidelity, rows[1].median_infidelity,
                  rows[2].median_infidelity, rows[3].median_infidelity,
                  rows[4].median_infidelity);
    report("8 noise-behavior", decreasing && exact_ok, buf);
}

void criterion_9_certificate() {
    bool pass = true;
    std::string detail = "all certificates pass; escape flagged";
    for (int two_s = 1; two_s <= 6 && pass; ++two_s) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto state =
                random_state(SpinLabel{two_s}, 900000 + 100 * two_s + trial);
            // 100 phase-operator trials per certificate, per the argument.
            CertificateOptions opts;
            opts.perturbed_parents = 10;
            const auto rep = certify_uniqueness_argument(
                state, 100, 900000 + trial, opts);
            if (!rep.pass) {
                pass = false;
                detail = "certificate failed at two_s=" +
                         std::to_string(two_s) + " trial " +
                         std::to_string(trial);
                break;
            }
        }
    }
    if (pass) {
        const auto exceptional =
            state_from_roots(make_roots(2, {Complex(1, 2), Complex(-1, 4)}));
        const auto rep = certify_uniqueness_argument(exceptional, 100, 9);
        if (!rep.pass || !rep.equivalence_class_escape ||
            rep.alternative_rootsets.size() != 1 ||
            !rootsets_equal(rep.alternative_rootsets[0],
                            make_roots(2, {Complex(1, 4), Complex(-1, 2)}),
                            1e-6)) {
            pass = false;
            detail = "exceptional pair not flagged as class escape";
        }
    }
    report("9 uniqueness-certificate", pass, detail);
}

}  // namespace

int main() {
    theorem_reproduction("1 theorem-reproduction-xyz", orthogonal_axes(), 100000);
    theorem_reproduction("2 theorem-reproduction-skew", skew_axes(), 200000);
    criterion_3_round_trip();
    criterion_4_parent_identities();
    criterion_5_recombination();
    criterion_6_oracle_equivalence();
    criterion_7_algebraic_invariants();
    criterion_8_noise_behavior();
    criterion_9_certificate();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
