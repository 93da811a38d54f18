#include <doctest.h>

#include <nlohmann/json.hpp>

#include "spinrecon/json_io.hpp"

using namespace spinrecon;
using nlohmann::json;

TEST_CASE("pure state round trip") {
    const auto state = random_state(SpinLabel{5}, 12);
    const json j = to_json(state);
    CHECK(j.at("schema") == kSchemaVersion);
    CHECK(j.at("two_s") == 5);
    const auto back = pure_state_from_json(j);
    CHECK((back.amplitudes - state.amplitudes).norm() < 1e-15);

    json bad = j;
    bad["amplitudes"].erase(0);
    CHECK_THROWS_AS(pure_state_from_json(bad), Error);
}

TEST_CASE("rootset round trip keeps infinities") {
    std::vector<Root> roots{Root::finite({1.5, -2.0}), Root::inf(),
                            Root::finite({0.0, 0.25})};
    const auto rs = RootSet::from_roots(SpinLabel{3}, roots);
    const json j = to_json(rs);
    int inf_count = 0;
    for (const auto& r : j.at("roots"))
        if (r.is_string()) ++inf_count;
    CHECK(inf_count == 1);
    CHECK(rootsets_equal(rootset_from_json(j), rs, 1e-12));
}

TEST_CASE("direction and axes round trip") {
    const Direction d(Eigen::Vector3d(0.6, 0.0, 0.8));
    const Direction back = direction_from_json(to_json(d));
    CHECK((back.n - d.n).norm() < 1e-15);

    const auto axes = validate_axes(Direction::x(), Direction::y(), Direction::z());
    const auto axes_back = axes_from_json(to_json(axes));
    CHECK(axes_back.triple_product == doctest::Approx(1.0));

    const json coplanar = json::array(
        {{1, 0, 0}, {0, 1, 0}, {std::sqrt(0.5), std::sqrt(0.5), 0}});
    CHECK_THROWS_AS(axes_from_json(coplanar), CoplanarAxes);
}

TEST_CASE("dataset round trip and validation") {
    const auto state = random_state(SpinLabel{2}, 3);
    const auto axes = validate_axes(Direction::x(), Direction::y(), Direction::z());

    SUBCASE("exact data") {
        const auto d = simulate_dataset(state, axes);
        const json j = to_json(d);
        CHECK(j.at("shots").is_null());
        const auto back = dataset_from_json(j);
        CHECK(!back.shots);
        for (int k = 0; k < 3; ++k)
            CHECK((back.p[k] - d.p[k]).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("shot data") {
        const auto d = simulate_dataset(
            state, axes, std::array<std::int64_t, 3>{100, 200, 300}, 9);
        const auto back = dataset_from_json(to_json(d));
        REQUIRE(back.shots);
        CHECK((*back.shots)[2] == 300);
        for (int k = 0; k < 3; ++k)
            CHECK((back.p[k] - d.p[k]).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("near-normalized vectors are renormalized") {
        json j = to_json(simulate_dataset(state, axes));
        j["probabilities"][0][0] =
            j["probabilities"][0][0].get<double>() + 5e-7;
        const auto back = dataset_from_json(j);
        CHECK(back.p[0].sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("badly normalized vectors are rejected") {
        json j = to_json(simulate_dataset(state, axes));
        j["probabilities"][1][0] = j["probabilities"][1][0].get<double>() + 1e-3;
        CHECK_THROWS_AS(dataset_from_json(j), Error);
    }
    SUBCASE("non-positive shot counts are rejected") {
        json j = to_json(simulate_dataset(
            state, axes, std::array<std::int64_t, 3>{100, 200, 300}, 9));
        j["shots"][0] = -5;
        CHECK_THROWS_AS(dataset_from_json(j), InvalidShotCount);
    }
}

TEST_CASE("result and report serializations carry the schema tag") {
    const auto state = random_state(SpinLabel{2}, 44);
    const auto axes = validate_axes(Direction::x(), Direction::y(), Direction::z());
    const auto d = simulate_dataset(state, axes);
    const auto result = reconstruct(d, ReconstructConfig{.restarts = 10, .seed = 2});
    const json jr = to_json(result);
    CHECK(jr.at("schema") == kSchemaVersion);
    CHECK(jr.at("verdict").is_string());
    CHECK(jr.at("candidates").size() == result.candidates.size());

    const json jg = to_json(classify_genericity(state));
    CHECK(jg.at("schema") == kSchemaVersion);
    CHECK((jg.at("verdict") == "GENERIC" || jg.at("verdict") == "EXCEPTIONAL"));

    const json jc = to_json(certify_uniqueness_argument(state, 5, 1));
    CHECK(jc.at("schema") == kSchemaVersion);
    CHECK(jc.contains("equivalence_class_escape"));

    const json jp = to_json(conjugate_partner_check(state, d));
    CHECK(jp.at("schema") == kSchemaVersion);
    CHECK(jp.contains("is_partner"));
}

TEST_CASE("noise sweep csv format") {
    std::vector<NoiseSweepRow> rows{{100, 0.5, 0.25, 0.75}, {0, 1e-12, 0.0, 2e-12}};
    const std::string csv = noise_sweep_csv(rows);
    CHECK(csv.rfind("shots,median_infidelity,q25,q75\n", 0) == 0);
    CHECK(csv.find("\n100,") != std::string::npos);
    CHECK(csv.find("\n0,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
