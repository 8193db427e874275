#pragma once

#include "fdw/density.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fdw {

inline constexpr double kNonNeuralWatts = 163.0;
inline constexpr double kNeuralWatts = 250.0;

struct EnergyModel {
    double power_watts = kNonNeuralWatts;
    int folds = 10;
    double grid_intensity_g_per_kwh = 275.0;
    double car_g_per_km = 122.0;

    void validate() const;
};

/// power * runtime * folds / 3600
double estimate_energy_wh(double runtime_s, const EnergyModel& model);
double co2_grams(double energy_kwh, const EnergyModel& model);
double car_km(double grams, const EnergyModel& model);
/// total * (total_count - kept) / total_count, assuming every pipeline costs the same.
double savings_estimate(double total_energy_wh, std::size_t kept, std::size_t total);

struct Recommendation {
    Band band;
    BandSplit split;
    EnergyModel energy;
    double runtime_estimate_s = 0.0;  // full sweep, one CV repetition
    double total_wh = 0.0;
    double saved_wh = 0.0;
    double saved_co2_g = 0.0;
    double saved_car_km = 0.0;
};

Recommendation recommend(std::span<const DensityRecord> records, Band band, double runtime_estimate_s,
                         const EnergyModel& energy);
nlohmann::json to_json(const Recommendation& rec);

struct PlanEntry {
    std::string pipeline;
    double fd = 0.0;
};

/// Coarse-to-fine schedule. Rounds are checkpointed as JSON so a sweep can
/// span several invocations.
struct SweepPlan {
    std::vector<PlanEntry> candidates;  // ascending fd
    std::vector<std::vector<std::string>> rounds;
    int stride = 1;
    double refine_radius = 0.0;
    std::size_t budget = 0;
    bool done = false;

    std::size_t scheduled() const;
    bool contains(const std::string& pipeline) const;
};

/// Round 1 probes every stride-th record in fd order plus the last one.
/// Throws ArgumentError when the budget cannot cover round 1.
SweepPlan coarse_to_fine(std::span<const DensityRecord> records, int stride, double refine_radius, std::size_t budget);

/// Adds a round of unexplored pipelines with |fd - fd_best| <= refine_radius,
/// where fd_best belongs to the best observed F1 (ties toward lower fd),
/// nearest first and cut to the remaining budget. Marks the plan done when
/// nothing is left to add. Returns the new round (possibly empty).
std::vector<std::string> refine(SweepPlan& plan, const std::map<std::string, double>& observed_f1);

nlohmann::json to_json(const SweepPlan& plan);
SweepPlan plan_from_json(const nlohmann::json& j);

}  // namespace fdw
