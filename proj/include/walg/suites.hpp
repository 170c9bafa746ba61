#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "walg/grading.hpp"
#include "walg/report.hpp"

namespace walg {

/// A second datum of the same nilpotent to compare against; offsets absent means Dynkin.
struct CompareTarget {
    std::optional<std::vector<int>> offsets;
    LagrangianChoice choice = LagrangianChoice::Positive;
};

struct JobConfig {
    std::uint64_t prime = 0;
    std::vector<int> partition;
    std::optional<std::vector<int>> offsets;
    LagrangianChoice choice = LagrangianChoice::Positive;
    int J = 8;
    std::optional<int> cap;
    std::vector<std::vector<long long>> etas;           // v-coordinates; empty means eta = chi only
    int random_etas = 0;                                 // extra eta drawn from the seed
    std::vector<std::vector<long long>> verma_weights;  // empty means two defaults
    int polytope_window = 3;
    std::vector<CompareTarget> compare;
    bool dump_table = false;
    long long reduced_limit = 4096;  // reduced suites run only when p^{dim g} is at most this
    std::uint64_t seed = 0;

    /// Throws ConfigError on schema violations.
    static JobConfig from_json(const nlohmann::json& j);
};

/// WALG_SEED, or 0 when unset. Throws ConfigError on a malformed value.
std::uint64_t seed_from_env();
LagrangianChoice parse_choice(const std::string& s);
std::vector<long long> parse_int_list(const std::string& s);

std::shared_ptr<const GradedNilpotentDatum> build_datum(const JobConfig& cfg, const std::optional<std::vector<int>>& offsets,
                                                        LagrangianChoice choice);
inline std::shared_ptr<const GradedNilpotentDatum> build_datum(const JobConfig& cfg) {
    return build_datum(cfg, cfg.offsets, cfg.choice);
}

/// Truncation for the extended algebra: max(J, p times the least bar-a degree).
int extended_bound(const GradedNilpotentDatum& d, int J);

/// Agreement of polytope membership and brute-force goodness over |delta_i| <= window.
CheckRecord polytope_sweep(const GradedNilpotentDatum& dynkin, int window);

Report run_gradings(const JobConfig& cfg);
Report run_walg(const JobConfig& cfg);
Report run_reduced(const JobConfig& cfg);

} // namespace walg
