#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinrecon/majorana.hpp"
#include "spinrecon/spin_core.hpp"

namespace spinrecon {

/// Three measurement directions spanning a volume in space.
struct AxisTriple {
    std::array<Direction, 3> axes;
    double triple_product = 0.0;
};

AxisTriple validate_axes(const Direction& a, const Direction& b, const Direction& c,
                         double volume_tol = 1e-9);

/// Three per-axis intensity vectors; shots absent means exact probabilities.
struct DataSet {
    SpinLabel spin;
    AxisTriple axes;
    std::array<Eigen::VectorXd, 3> p;
    std::optional<std::array<std::int64_t, 3>> shots;
};

/// Exact probabilities, or one multinomial sample per axis when shot
/// counts are given. Deterministic per seed.
DataSet simulate_dataset(const PureState& state, const AxisTriple& axes,
                         std::optional<std::array<std::int64_t, 3>> shots = {},
                         std::uint64_t seed = 0);

/// Sum of squared probability mismatches over all three axes.
double residual(const PureState& state, const DataSet& dataset);

struct Candidate {
    PureState state;
    double residual = 0.0;
    std::optional<double> fidelity_to_reference;
};

enum class Verdict { Unique, Ambiguous, Failed };

struct ReconstructConfig {
    int restarts = 50;
    std::uint64_t seed = 0;
    std::optional<double> accept_tol;  // default 1e-18 exact, 3/min(shots) noisy
    double dedup_tol = 1e-8;
    int threads = 0;  // 0 = serial
};

struct ReconstructionResult {
    std::vector<Candidate> candidates;  // ray-deduplicated, residual-sorted
    Verdict verdict = Verdict::Failed;
    struct Diagnostics {
        int restarts_used = 0;
        double best_residual = 0.0;
        double accept_tol = 0.0;
        std::string genericity;  // of the best candidate, when any
    } diagnostics;
};

/// Phase retrieval: candidates carry the measured moduli in the first
/// axis's eigenbasis and the remaining free phases are found by multistart
/// local least squares against the other two intensity vectors.
ReconstructionResult reconstruct(const DataSet& dataset,
                                 const ReconstructConfig& config = {});

struct ConjugatePartnerReport {
    bool is_partner = false;
    PureState partner;
    double partner_residual = 0.0;
    double sy_expectation = 0.0;    // <psi|s_y|psi>
    double sy_cubed_expectation = 0.0;
    bool odd_sy_moments_vanish = false;
};

/// Checks whether the componentwise conjugate reproduces the dataset as a
/// distinct ray, and reports the odd s_y moments that characterize it.
ConjugatePartnerReport conjugate_partner_check(const PureState& state,
                                               const DataSet& dataset);

/// Exhaustive phase-grid search for 2s <= 2; independent ground truth for
/// reconstruct on small instances. Requires exact-probability data.
std::vector<Candidate> brute_force_oracle(const DataSet& dataset,
                                          int grid_points_per_phase = 720);

struct NoiseSweepRow {
    std::int64_t shots = 0;  // <= 0 means exact probabilities
    double median_infidelity = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

/// Repeated simulate+reconstruct cycles per shot count; infidelity is
/// 1 - fidelity(best candidate, state).
std::vector<NoiseSweepRow> noise_sweep(const PureState& state, const AxisTriple& axes,
                                       const std::vector<std::int64_t>& shot_grid,
                                       int repeats, std::uint64_t seed,
                                       const ReconstructConfig& config = {});

}  // namespace spinrecon
