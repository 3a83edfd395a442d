#pragma once

#include <cstdint>
#include <string>

#include "output.hpp"

namespace rgkit::cli {

// Module invariant suites behind `<subcommand> --check`. Each row is one check;
// Report::ok is false when any row failed.
Report check_wick(std::uint64_t seed);
Report check_grassmann(std::uint64_t seed);
Report check_symanzik(std::uint64_t seed);
Report check_forest(std::uint64_t seed);
Report check_bounds(std::uint64_t seed);
Report check_flow(std::uint64_t seed);
Report check_sectors(std::uint64_t seed);
Report check_toy(std::uint64_t seed);

}  // namespace rgkit::cli
