#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "spinrecon/json_io.hpp"

namespace {

using nlohmann::json;
using namespace spinrecon;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitFailedReconstruction = 3;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file: " + out_path);
    out << text << "\n";
}

std::vector<std::int64_t> parse_shot_list(const std::string& spec) {
    std::vector<std::int64_t> shots;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        shots.push_back(std::stoll(item));
    return shots;
}

int env_threads() {
    const char* env = std::getenv("SPINRECON_THREADS");
    if (!env) return 0;
    return std::max(0, std::atoi(env));
}

struct Options {
    std::string state_path, data_path, axes_path, out_path;
    std::string shots_spec;
    std::uint64_t seed = 0;
    int restarts = 50;
    double tol = 0.0;  // 0 = library default
    int grid = 720;
    int trials = 100;
    int repeats = 20;
    int max_spin_check = kMaxParentTwoS;
};

AxisTriple load_axes(const Options& opt) {
    if (opt.axes_path.empty()) {
        return validate_axes(Direction::x(), Direction::y(), Direction::z());
    }
    return axes_from_json(load_json(opt.axes_path));
}

int cmd_simulate(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    const AxisTriple axes = load_axes(opt);
    std::optional<std::array<std::int64_t, 3>> shots;
    if (!opt.shots_spec.empty()) {
        const auto list = parse_shot_list(opt.shots_spec);
        if (list.size() == 1)
            shots = std::array<std::int64_t, 3>{list[0], list[0], list[0]};
        else if (list.size() == 3)
            shots = std::array<std::int64_t, 3>{list[0], list[1], list[2]};
        else
            throw Error("--shots expects one or three comma-separated counts");
    }
    const DataSet d = simulate_dataset(state, axes, shots, opt.seed);
    write_output(opt.out_path, to_json(d).dump(2));
    return kExitOk;
}

int cmd_reconstruct(const Options& opt) {
    const DataSet d = dataset_from_json(load_json(opt.data_path));
    ReconstructConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.seed = opt.seed;
    cfg.threads = env_threads();
    if (opt.tol > 0.0) cfg.accept_tol = opt.tol;
    const ReconstructionResult result = reconstruct(d, cfg);
    write_output(opt.out_path, to_json(result).dump(2));
    return result.verdict == Verdict::Failed ? kExitFailedReconstruction : kExitOk;
}

int cmd_roots(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    write_output(opt.out_path, to_json(roots_from_state(state)).dump(2));
    return kExitOk;
}

int cmd_classify(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    const double tol = opt.tol > 0.0 ? opt.tol : 1e-9;
    write_output(opt.out_path, to_json(classify_genericity(state, tol)).dump(2));
    return kExitOk;
}

int cmd_verify_parent(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    if (state.spin.two_s > opt.max_spin_check)
        throw DimensionTooLarge("state exceeds --max-spin-check");
    const CertificateReport report =
        certify_uniqueness_argument(state, opt.trials, opt.seed);
    write_output(opt.out_path, to_json(report).dump(2));
    return kExitOk;
}

int cmd_ambiguity(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    DataSet d = opt.data_path.empty()
                    ? simulate_dataset(state, load_axes(opt))
                    : dataset_from_json(load_json(opt.data_path));
    write_output(opt.out_path, to_json(conjugate_partner_check(state, d)).dump(2));
    return kExitOk;
}

int cmd_noise_sweep(const Options& opt) {
    const PureState state = pure_state_from_json(load_json(opt.state_path));
    const AxisTriple axes = load_axes(opt);
    if (opt.shots_spec.empty()) throw Error("--shots grid is required");
    ReconstructConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.threads = env_threads();
    const auto rows = noise_sweep(state, axes, parse_shot_list(opt.shots_spec),
                                  opt.repeats, opt.seed, cfg);
    write_output(opt.out_path, noise_sweep_csv(rows));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure spin-state reconstruction from three-axis intensities"};
    app.set_version_flag("--version", std::string(kSchemaVersion));
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_path, "output path (default stdout)");
        sub->add_option("--seed", opt.seed, "random seed");
    };

    auto* simulate = app.add_subcommand("simulate", "simulate a dataset");
    simulate->add_option("--state", opt.state_path)->required();
    simulate->add_option("--axes", opt.axes_path, "axes JSON (default x,y,z)");
    simulate->add_option("--shots", opt.shots_spec, "per-axis shot counts a,b,c");
    add_common(simulate);

    auto* rec = app.add_subcommand("reconstruct", "reconstruct from a dataset");
    rec->add_option("--data", opt.data_path)->required();
    rec->add_option("--restarts", opt.restarts)->check(CLI::PositiveNumber);
    rec->add_option("--tol", opt.tol, "acceptance residual")->check(CLI::PositiveNumber);
    add_common(rec);

    auto* roots = app.add_subcommand("roots", "Majorana roots of a state");
    roots->add_option("--state", opt.state_path)->required();
    add_common(roots);

    auto* classify = app.add_subcommand("classify", "genericity classification");
    classify->add_option("--state", opt.state_path)->required();
    classify->add_option("--tol", opt.tol)->check(CLI::PositiveNumber);
    add_common(classify);

    auto* verify = app.add_subcommand("verify-parent", "parent-space certificate");
    verify->add_option("--state", opt.state_path)->required();
    verify->add_option("--trials", opt.trials)->check(CLI::PositiveNumber);
    verify->add_option("--max-spin-check", opt.max_spin_check)
        ->check(CLI::PositiveNumber);
    add_common(verify);

    auto* ambiguity = app.add_subcommand("ambiguity", "conjugate-partner check");
    ambiguity->add_option("--state", opt.state_path)->required();
    ambiguity->add_option("--data", opt.data_path, "dataset (default exact x,y,z)");
    ambiguity->add_option("--axes", opt.axes_path);
    add_common(ambiguity);

    auto* sweep = app.add_subcommand("noise-sweep", "shot-noise infidelity sweep");
    sweep->add_option("--state", opt.state_path)->required();
    sweep->add_option("--axes", opt.axes_path);
    sweep->add_option("--shots", opt.shots_spec, "shot grid, comma separated")
        ->required();
    sweep->add_option("--repeats", opt.repeats)->check(CLI::PositiveNumber);
    sweep->add_option("--restarts", opt.restarts)->check(CLI::PositiveNumber);
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opt);
        if (rec->parsed()) return cmd_reconstruct(opt);
        if (roots->parsed()) return cmd_roots(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (verify->parsed()) return cmd_verify_parent(opt);
        if (ambiguity->parsed()) return cmd_ambiguity(opt);
        if (sweep->parsed()) return cmd_noise_sweep(opt);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
