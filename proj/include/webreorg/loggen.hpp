#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webreorg/sitegraph.hpp"

namespace webreorg {

// Simulates n_users visitors random-walking the graph from page 0 and emits
// one Combined Log Format line per step, in global timestamp order. Walks
// follow existing out-links and restart at page 0 on dead ends (the restart
// line carries no referrer, like a typed URL). Timestamps are strictly
// increasing within one user. Output is deterministic for a fixed seed.
std::vector<std::string> generate_synthetic_logs(const SiteGraph& graph,
                                                 int n_users,
                                                 int steps_per_user,
                                                 std::uint64_t rng_seed);

}  // namespace webreorg
