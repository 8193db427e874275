#include "fdw/error.hpp"
#include "fdw/fixtures.hpp"
#include "fdw/planner.hpp"
#include "fdw/random.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace fdw;

namespace {

EnergyModel model(double watts, int folds) {
    EnergyModel m;
    m.power_watts = watts;
    m.folds = folds;
    return m;
}

std::vector<DensityRecord> ladder(std::size_t n) {
    std::vector<DensityRecord> r;
    const auto& all = enumerate_pipelines();
    for (std::size_t i = 0; i < n; ++i) r.push_back(make_density_record(all[i], i + 1, 1000));
    return r;
}

std::set<std::string> scheduled_names(const SweepPlan& p) {
    std::set<std::string> s;
    for (const auto& round : p.rounds)
        for (const auto& n : round) CHECK(s.insert(n).second);
    return s;
}

}  // namespace

TEST_CASE("energy: worked examples") {
    CHECK(estimate_energy_wh(176.26, model(163, 10)) == doctest::Approx(79.81).epsilon(0.01 / 79.81));
    CHECK(std::abs(estimate_energy_wh(62361.45, model(250, 10)) - 43306.56) <= 0.01);
    CHECK(estimate_energy_wh(3600, model(1000, 1)) == doctest::Approx(1000.0));
    EnergyModel m;
    CHECK(co2_grams(21.0, m) == doctest::Approx(5775.0));
    CHECK(car_km(5775.0, m) == doctest::Approx(47.3).epsilon(0.001));
    CHECK(co2_grams(0.0, m) == 0.0);
    CHECK(car_km(0.0, m) == 0.0);
}

TEST_CASE("energy is linear in runtime and power") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform01() * 1e4;
        const double w = 1 + rng.uniform01() * 500;
        const double k = 0.1 + rng.uniform01() * 10;
        const double base = estimate_energy_wh(t, model(w, 10));
        CHECK(estimate_energy_wh(k * t, model(w, 10)) == doctest::Approx(k * base).epsilon(1e-12));
        CHECK(estimate_energy_wh(t, model(k * w, 10)) == doctest::Approx(k * base).epsilon(1e-12));
    }
}

TEST_CASE("energy reproduces every published Wh value") {
    for (const auto& row : load_tables().table4) {
        const double wh = estimate_energy_wh(row.runtime_s, model(row.neural ? kNeuralWatts : kNonNeuralWatts, 10));
        CAPTURE(row.classifier);
        CHECK(std::abs(wh - row.power_wh) <= 0.01);
    }
}

TEST_CASE("savings") {
    CHECK(savings_estimate(79.81, 38, 68) == doctest::Approx(35.2).epsilon(0.002));
    CHECK(savings_estimate(123.0, 68, 68) == 0.0);
    const double cnn = savings_estimate(43306.56, 38, 68);
    CHECK(cnn / 1000 == doctest::Approx(19.1).epsilon(0.003));
    CHECK(std::abs(cnn / 1000 - 21.0) / 21.0 < 0.10);
    CHECK_THROWS_AS(savings_estimate(1.0, 5, 4), ArgumentError);
}

TEST_CASE("energy model validation") {
    EnergyModel m;
    CHECK_NOTHROW(m.validate());
    m.power_watts = -1;
    CHECK_THROWS_AS(m.validate(), ArgumentError);
    m = {};
    m.folds = 0;
    CHECK_THROWS_AS(m.validate(), ArgumentError);
}

TEST_CASE("recommend over the published table") {
    const auto rec = recommend(load_tables().densities(), {0.05, 0.15}, 176.26, model(163, 10));
    CHECK(rec.split.keep.size() == 38);
    CHECK(rec.split.skip.size() == 30);
    CHECK(rec.saved_wh == doctest::Approx(35.2).epsilon(0.002));
    const auto j = to_json(rec);
    CHECK(j.at("kept").size() == 38);
    CHECK(j.at("skipped").size() == 30);
    CHECK(j.at("assumptions").at("power_watts") == 163.0);
    CHECK(j.at("assumptions").at("folds") == 10);
    CHECK(j.at("assumptions").contains("grid_intensity_g_per_kwh"));
    CHECK(j.at("estimate").contains("saved_co2_g"));
    CHECK(j.at("estimate").contains("saved_car_km"));
}

TEST_CASE("coarse_to_fine: round sizes") {
    auto p = coarse_to_fine(ladder(68), 4, 0.0, 68);
    REQUIRE(p.rounds.size() == 1);
    CHECK(p.rounds[0].size() == 18);
    CHECK(p.rounds[0].back() == pipeline_name(enumerate_pipelines()[67]));
    CHECK_FALSE(p.done);

    auto all = coarse_to_fine(ladder(68), 1, 0.05, 68);
    CHECK(all.rounds.size() == 1);
    CHECK(all.rounds[0].size() == 68);
    CHECK(all.done);
    std::map<std::string, double> observed;
    for (const auto& n : all.rounds[0]) observed[n] = 0.5;
    CHECK(refine(all, observed).empty());
    CHECK(all.rounds.size() == 1);

    CHECK_THROWS_AS(coarse_to_fine(ladder(68), 4, 0.0, 10), ArgumentError);
    CHECK_THROWS_AS(coarse_to_fine(ladder(68), 0, 0.0, 68), ArgumentError);
}

TEST_CASE("refine: radius 0 adds only equal-fd pipelines") {
    auto records = ladder(12);
    records[4] = make_density_record(records[4].pipeline, 4, 1000);  // same fd as index 3, not probed at stride 3
    auto p = coarse_to_fine(records, 3, 0.0, 12);
    std::map<std::string, double> observed;
    for (const auto& n : p.rounds[0]) observed[n] = 0.1;
    const auto best = pipeline_name(records[3].pipeline);
    REQUIRE(p.contains(best));
    observed[best] = 0.9;
    auto round = refine(p, observed);
    REQUIRE(round.size() == 1);
    CHECK(round[0] == pipeline_name(records[4].pipeline));
    CHECK(refine(p, observed).empty());
    CHECK(p.done);
}

TEST_CASE("plans never repeat a pipeline and stay within budget and input") {
    Rng rng(6);
    for (int t = 0; t < 40; ++t) {
        auto records = ladder(68);
        const int stride = 1 + static_cast<int>(rng.uniform_index(8));
        const double radius = rng.uniform01() * 0.03;
        const std::size_t first = (68 + static_cast<std::size_t>(stride) - 1) / static_cast<std::size_t>(stride) + 1;
        const std::size_t budget = std::min<std::size_t>(68, first + rng.uniform_index(30));
        SweepPlan p = coarse_to_fine(records, stride, radius, budget);
        for (int r = 0; r < 10 && !p.done; ++r) {
            std::map<std::string, double> observed;
            for (const auto& round : p.rounds)
                for (const auto& n : round) observed[n] = rng.uniform01();
            refine(p, observed);
        }
        auto names = scheduled_names(p);
        CHECK(names.size() == p.scheduled());
        CHECK(p.scheduled() <= budget);
        std::set<std::string> input;
        for (const auto& r : records) input.insert(r.name());
        for (const auto& n : names) CHECK(input.count(n));
    }
}

TEST_CASE("plan JSON round trip and validation") {
    auto p = coarse_to_fine(ladder(20), 4, 0.01, 15);
    std::map<std::string, double> observed;
    for (const auto& n : p.rounds[0]) observed[n] = 0.3;
    refine(p, observed);
    auto back = plan_from_json(to_json(p));
    CHECK(to_json(back) == to_json(p));
    CHECK(back.rounds == p.rounds);
    CHECK(back.budget == p.budget);

    auto j = to_json(p);
    j["rounds"].push_back(j["rounds"][0]);
    CHECK_THROWS_AS(plan_from_json(j), DataError);
    CHECK_THROWS_AS(plan_from_json(nlohmann::json::object()), DataError);
}
