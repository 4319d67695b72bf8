#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <setcd/norms.hpp>

namespace setcd {

enum class VerifyLevel { Fast, Full };

VerifyLevel parse_verify_level(std::string_view name);

struct CheckResult
{
    std::string name;
    std::string graph;
    bool passed = true;
    /// Smallest margin to the tolerance seen; negative means violated.
    double worst_slack = 0.0;
    int samples = 0;
    std::string detail;
    Vector witness;
};

struct VerifyReport
{
    VerifyLevel level = VerifyLevel::Fast;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const;
    int failures() const;
};

/// Throws InequalityViolated unless the projector is idempotent, symmetric
/// and of the expected rank.
void require_projector(const RangeProjector& proj, int expected_rank);

/// Fast: P2, K3, P3. Full adds the 4-star, C4, K4 and random connected graphs
/// with n <= 6, and raises the sample counts.
VerifyReport verify(VerifyLevel level, std::uint64_t seed = 0);

nlohmann::json to_json(const VerifyReport& report);

} // namespace setcd
