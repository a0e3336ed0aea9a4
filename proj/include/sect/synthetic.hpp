#pragma once

#include <cstdint>
#include <string>

namespace sect {

/// Writes a cohort of disk masks with 0-3 interior holes and 1-2 components,
/// a noise covariate table, a response driven by the hole and component
/// counts, and a manifest tying them together. Every generated mask is
/// checked against its intended Betti numbers. Returns the manifest path.
std::string generate_synthetic_cohort(int n, std::uint64_t seed, const std::string& out_dir);

}  // namespace sect
