#include "fdw/planner.hpp"

#include "fdw/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fdw {

void EnergyModel::validate() const {
    if (!(power_watts > 0)) throw ArgumentError("power must be positive");
    if (folds < 1) throw ArgumentError("folds must be positive");
    if (!(grid_intensity_g_per_kwh > 0)) throw ArgumentError("grid intensity must be positive");
    if (!(car_g_per_km > 0)) throw ArgumentError("car emissions must be positive");
}

double estimate_energy_wh(double runtime_s, const EnergyModel& model) {
    if (runtime_s < 0) throw ArgumentError("runtime must be non-negative");
    return model.power_watts * runtime_s * model.folds / 3600.0;
}

double co2_grams(double energy_kwh, const EnergyModel& model) {
    if (energy_kwh < 0) throw ArgumentError("energy must be non-negative");
    return energy_kwh * model.grid_intensity_g_per_kwh;
}

double car_km(double grams, const EnergyModel& model) { return grams / model.car_g_per_km; }

double savings_estimate(double total_energy_wh, std::size_t kept, std::size_t total) {
    if (total == 0 || kept > total) throw ArgumentError("savings need 0 <= kept <= total and total > 0");
    return total_energy_wh * static_cast<double>(total - kept) / static_cast<double>(total);
}

Recommendation recommend(std::span<const DensityRecord> records, Band band, double runtime_estimate_s,
                         const EnergyModel& energy) {
    energy.validate();
    if (records.empty()) throw ArgumentError("no density records to recommend from");
    Recommendation r;
    r.band = band;
    r.energy = energy;
    r.split = band_filter(records, band.lo, band.hi);
    r.runtime_estimate_s = runtime_estimate_s;
    r.total_wh = estimate_energy_wh(runtime_estimate_s, energy);
    r.saved_wh = savings_estimate(r.total_wh, r.split.keep.size(), records.size());
    r.saved_co2_g = co2_grams(r.saved_wh / 1000.0, energy);
    r.saved_car_km = car_km(r.saved_co2_g, energy);
    return r;
}

nlohmann::json to_json(const Recommendation& rec) {
    using nlohmann::json;
    json kept = json::array(), skipped = json::array();
    for (const auto& d : rec.split.keep) kept.push_back(d.name());
    for (const auto& d : rec.split.skip) skipped.push_back(d.name());
    return json{
        {"band", {{"lo", rec.band.lo}, {"hi", rec.band.hi}}},
        {"kept", kept},
        {"skipped", skipped},
        {"kept_count", rec.split.keep.size()},
        {"total_count", rec.split.keep.size() + rec.split.skip.size()},
        {"estimate",
         {{"total_wh", rec.total_wh},
          {"saved_wh", rec.saved_wh},
          {"saved_co2_g", rec.saved_co2_g},
          {"saved_car_km", rec.saved_car_km}}},
        {"assumptions",
         {{"power_watts", rec.energy.power_watts},
          {"folds", rec.energy.folds},
          {"grid_intensity_g_per_kwh", rec.energy.grid_intensity_g_per_kwh},
          {"car_g_per_km", rec.energy.car_g_per_km},
          {"runtime_estimate_s", rec.runtime_estimate_s},
          {"cost_model", "uniform per-pipeline cost; an estimate until actual runtimes are measured"}}},
    };
}

std::size_t SweepPlan::scheduled() const {
    std::size_t n = 0;
    for (const auto& r : rounds) n += r.size();
    return n;
}

bool SweepPlan::contains(const std::string& pipeline) const {
    for (const auto& r : rounds) {
        if (std::find(r.begin(), r.end(), pipeline) != r.end()) return true;
    }
    return false;
}

SweepPlan coarse_to_fine(std::span<const DensityRecord> records, int stride, double refine_radius, std::size_t budget) {
    if (stride < 1) throw ArgumentError("stride must be at least 1");
    if (refine_radius < 0) throw ArgumentError("refine radius must be non-negative");
    if (records.empty()) throw ArgumentError("no density records to plan over");
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].fd < records[i - 1].fd) throw ArgumentError("density records must be sorted by fd");
    }
    SweepPlan plan;
    plan.stride = stride;
    plan.refine_radius = refine_radius;
    plan.budget = budget;
    for (const auto& r : records) plan.candidates.push_back({r.name(), r.fd});

    std::vector<std::string> first;
    const auto step = static_cast<std::size_t>(stride);
    for (std::size_t i = 0; i < records.size(); i += step) first.push_back(plan.candidates[i].pipeline);
    if ((records.size() - 1) % step != 0) first.push_back(plan.candidates.back().pipeline);
    if (budget < first.size()) {
        throw ArgumentError("budget " + std::to_string(budget) + " is smaller than the first round (" +
                            std::to_string(first.size()) + " probes at stride " + std::to_string(stride) + ")");
    }
    plan.rounds.push_back(std::move(first));
    plan.done = plan.scheduled() == plan.candidates.size() || plan.scheduled() == budget;
    return plan;
}

std::vector<std::string> refine(SweepPlan& plan, const std::map<std::string, double>& observed_f1) {
    if (plan.done) return {};
    const PlanEntry* best = nullptr;
    double best_f1 = 0.0;
    for (const auto& c : plan.candidates) {
        auto it = observed_f1.find(c.pipeline);
        if (it == observed_f1.end() || !plan.contains(c.pipeline)) continue;
        if (!best || it->second > best_f1 || (it->second == best_f1 && c.fd < best->fd)) {
            best = &c;
            best_f1 = it->second;
        }
    }
    if (!best) throw ArgumentError("no results for any scheduled pipeline; run the current round first");

    std::vector<const PlanEntry*> pool;
    for (const auto& c : plan.candidates) {
        if (!plan.contains(c.pipeline) && std::abs(c.fd - best->fd) <= plan.refine_radius) pool.push_back(&c);
    }
    std::stable_sort(pool.begin(), pool.end(), [&](const PlanEntry* a, const PlanEntry* b) {
        return std::abs(a->fd - best->fd) < std::abs(b->fd - best->fd);
    });
    const std::size_t room = plan.budget - plan.scheduled();
    if (pool.size() > room) pool.resize(room);

    std::vector<std::string> round;
    for (const auto* c : pool) round.push_back(c->pipeline);
    if (round.empty()) {
        plan.done = true;
        return round;
    }
    plan.rounds.push_back(round);
    if (plan.scheduled() >= plan.budget) plan.done = true;
    return round;
}

nlohmann::json to_json(const SweepPlan& plan) {
    using nlohmann::json;
    json candidates = json::array();
    for (const auto& c : plan.candidates) candidates.push_back({{"pipeline", c.pipeline}, {"fd", c.fd}});
    return json{{"stride", plan.stride},
                {"refine_radius", plan.refine_radius},
                {"budget", plan.budget},
                {"done", plan.done},
                {"candidates", candidates},
                {"rounds", plan.rounds}};
}

SweepPlan plan_from_json(const nlohmann::json& j) {
    try {
        SweepPlan plan;
        plan.stride = j.at("stride").get<int>();
        plan.refine_radius = j.at("refine_radius").get<double>();
        plan.budget = j.at("budget").get<std::size_t>();
        plan.done = j.at("done").get<bool>();
        for (const auto& c : j.at("candidates")) {
            plan.candidates.push_back({c.at("pipeline").get<std::string>(), c.at("fd").get<double>()});
        }
        plan.rounds = j.at("rounds").get<std::vector<std::vector<std::string>>>();
        std::set<std::string> seen;
        for (const auto& r : plan.rounds) {
            for (const auto& p : r) {
                if (!seen.insert(p).second) throw DataError("plan schedules " + p + " twice");
            }
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed plan: ") + e.what());
    }
}

}  // namespace fdw
