#include "spinrecon/json_io.hpp"

#include <nlohmann/json.hpp>

namespace spinrecon {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

Eigen::VectorXd checked_probability_vector(const json& j, int dim) {
    if (static_cast<int>(j.size()) != dim)
        throw Error("probability vector has wrong length");
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) p[i] = j.at(i).get<double>();
    const double sum = p.sum();
    if (std::abs(sum - 1.0) > 1e-6)
        throw Error("probability vector does not sum to 1");
    return p / sum;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Unique: return "UNIQUE";
        case Verdict::Ambiguous: return "AMBIGUOUS";
        case Verdict::Failed: return "FAILED";
    }
    return "FAILED";
}

}  // namespace

json to_json(const PureState& state) {
    json amps = json::array();
    for (int i = 0; i < state.amplitudes.size(); ++i)
        amps.push_back(complex_to_json(state.amplitudes[i]));
    return json{{"schema", kSchemaVersion},
                {"two_s", state.spin.two_s},
                {"amplitudes", amps}};
}

PureState pure_state_from_json(const json& j) {
    const SpinLabel spin{j.at("two_s").get<int>()};
    const auto& amps = j.at("amplitudes");
    if (static_cast<int>(amps.size()) != spin.dim())
        throw Error("amplitude count does not match 2s+1");
    Vector v(spin.dim());
    for (int i = 0; i < spin.dim(); ++i) v[i] = complex_from_json(amps.at(i));
    return PureState::from_amplitudes(spin, std::move(v));
}

json to_json(const Direction& dir) {
    return json{{"n", {dir.n[0], dir.n[1], dir.n[2]}}};
}

Direction direction_from_json(const json& j) {
    const auto& n = j.at("n");
    return Direction({n.at(0).get<double>(), n.at(1).get<double>(),
                      n.at(2).get<double>()});
}

json to_json(const RootSet& rootset) {
    json roots = json::array();
    for (const auto& r : rootset.roots) {
        if (r.is_inf)
            roots.push_back("inf");
        else
            roots.push_back(complex_to_json(r.z));
    }
    return json{{"schema", kSchemaVersion},
                {"two_s", rootset.spin.two_s},
                {"roots", roots}};
}

RootSet rootset_from_json(const json& j) {
    const SpinLabel spin{j.at("two_s").get<int>()};
    std::vector<Root> roots;
    for (const auto& r : j.at("roots")) {
        if (r.is_string() && r.get<std::string>() == "inf")
            roots.push_back(Root::inf());
        else
            roots.push_back(Root::finite(complex_from_json(r)));
    }
    return RootSet::from_roots(spin, std::move(roots));
}

json to_json(const AxisTriple& axes) {
    json a = json::array();
    for (const auto& d : axes.axes)
        a.push_back({d.n[0], d.n[1], d.n[2]});
    return a;
}

AxisTriple axes_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("axes");
    if (arr.size() != 3) throw Error("expected three axes");
    const auto dir = [&](int k) {
        return Direction({arr.at(k).at(0).get<double>(),
                          arr.at(k).at(1).get<double>(),
                          arr.at(k).at(2).get<double>()});
    };
    return validate_axes(dir(0), dir(1), dir(2));
}

json to_json(const DataSet& dataset) {
    json probs = json::array();
    for (const auto& p : dataset.p) {
        json row = json::array();
        for (int i = 0; i < p.size(); ++i) row.push_back(p[i]);
        probs.push_back(row);
    }
    json shots = nullptr;
    if (dataset.shots)
        shots = json::array({(*dataset.shots)[0], (*dataset.shots)[1],
                             (*dataset.shots)[2]});
    return json{{"schema", kSchemaVersion},
                {"two_s", dataset.spin.two_s},
                {"axes", to_json(dataset.axes)},
                {"probabilities", probs},
                {"shots", shots}};
}

DataSet dataset_from_json(const json& j) {
    const SpinLabel spin{j.at("two_s").get<int>()};
    DataSet d{spin, axes_from_json(j.at("axes")), {}, {}};
    const auto& probs = j.at("probabilities");
    if (probs.size() != 3) throw Error("expected three probability vectors");
    for (int k = 0; k < 3; ++k)
        d.p[k] = checked_probability_vector(probs.at(k), spin.dim());
    if (j.contains("shots") && !j.at("shots").is_null()) {
        const auto& s = j.at("shots");
        d.shots = std::array<std::int64_t, 3>{s.at(0).get<std::int64_t>(),
                                              s.at(1).get<std::int64_t>(),
                                              s.at(2).get<std::int64_t>()};
        for (const auto n : *d.shots)
            if (n <= 0) throw InvalidShotCount("shot counts must be positive");
    }
    return d;
}

json to_json(const ReconstructionResult& result) {
    json candidates = json::array();
    for (const auto& c : result.candidates) {
        json entry{{"state", to_json(c.state)}, {"residual", c.residual}};
        if (c.fidelity_to_reference)
            entry["fidelity_to_reference"] = *c.fidelity_to_reference;
        candidates.push_back(entry);
    }
    return json{{"schema", kSchemaVersion},
                {"verdict", verdict_name(result.verdict)},
                {"candidates", candidates},
                {"diagnostics",
                 {{"restarts_used", result.diagnostics.restarts_used},
                  {"best_residual", result.diagnostics.best_residual},
                  {"accept_tol", result.diagnostics.accept_tol},
                  {"genericity", result.diagnostics.genericity}}}};
}

json to_json(const GenericityReport& report) {
    json rootsets = json::array();
    for (const auto& rs : report.consistent_rootsets) rootsets.push_back(to_json(rs));
    json collisions = json::array();
    for (const auto& [r, rp] : report.collisions)
        collisions.push_back({r, rp});
    return json{{"schema", kSchemaVersion},
                {"verdict", report.verdict == Genericity::Generic ? "GENERIC"
                                                                  : "EXCEPTIONAL"},
                {"consistent_rootsets", rootsets},
                {"collisions", collisions}};
}

json to_json(const CertificateReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"max_error", c.max_error},
                          {"pass", c.pass}});
    json alternatives = json::array();
    for (std::size_t i = 0; i < report.alternative_rootsets.size(); ++i)
        alternatives.push_back(
            {{"rootset", to_json(report.alternative_rootsets[i])},
             {"expectation_gap", report.alternative_expectation_gaps[i]}});
    return json{{"schema", kSchemaVersion},
                {"checks", checks},
                {"verdict", report.pass ? "pass" : "fail"},
                {"equivalence_class_escape", report.equivalence_class_escape},
                {"alternative_classes", alternatives}};
}

json to_json(const ConjugatePartnerReport& report) {
    return json{{"schema", kSchemaVersion},
                {"is_partner", report.is_partner},
                {"partner", to_json(report.partner)},
                {"partner_residual", report.partner_residual},
                {"sy_expectation", report.sy_expectation},
                {"sy_cubed_expectation", report.sy_cubed_expectation},
                {"odd_sy_moments_vanish", report.odd_sy_moments_vanish}};
}

std::string noise_sweep_csv(const std::vector<NoiseSweepRow>& rows) {
    std::string out = "shots,median_infidelity,q25,q75\n";
    char line[128];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%lld,%.12e,%.12e,%.12e\n",
                      static_cast<long long>(row.shots), row.median_infidelity,
                      row.q25, row.q75);
        out += line;
    }
    return out;
}

}  // namespace spinrecon
