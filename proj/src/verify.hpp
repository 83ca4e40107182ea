#pragma once

// Cross-module property suite behind `sscqp verify`. Each property runs a
// number of seeded random checks; a failing check keeps the first seed so
// the case can be replayed with `--seed <run seed> --only <property>`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sscqp {

struct VerifyConfig {
    std::uint64_t seed = 1;
    int sweep = 1000;           ///< random checks for the cheap pointwise properties
    int instances = 40;         ///< generated instances for solve-based properties
    std::size_t n = 30;         ///< dimension of solve-based instances
    std::size_t oracle_n = 8;   ///< largest oracle dimension (2..oracle_n)
    int oracle_count = 150;
    std::vector<std::string> only;  ///< empty: every property

    /// Throws InvalidArgument on non-positive sizes, oracle_n outside [2, 20]
    /// or an unknown property name in `only`.
    void validate() const;
};

struct PropertyResult {
    std::string name;
    int checks = 0;
    int passed = 0;
    std::optional<std::uint64_t> failing_seed;  ///< first failing case
    std::string detail;                          ///< message of the first failure

    [[nodiscard]] bool ok() const noexcept { return checks > 0 && passed == checks; }
};

struct VerifyReport {
    std::uint64_t seed;
    std::vector<PropertyResult> properties;

    [[nodiscard]] bool passed() const noexcept;
    /// One line per property, then a summary; failures name their case seed.
    [[nodiscard]] std::string text() const;
};

const std::vector<std::string>& property_names();

VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace sscqp
