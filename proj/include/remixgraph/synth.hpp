#pragma once

#include <cstddef>
#include <cstdint>

#include "remixgraph/model.hpp"

namespace remixgraph::synth {

struct SynthConfig {
    std::size_t n = 1000;
    double p_multi = 0.0143;      // probability a new design takes two parents
    std::size_t tag_pool = 200;   // distinct tags "tag-0" .. "tag-<pool-1>"
    std::size_t tags_per_design = 4;
    double p_inherit = 0.5;       // per parent tag
    std::uint64_t seed = 0;
};

/// Throws InvalidConfig when a probability is outside [0, 1] or a count is zero.
void validate(const SynthConfig& config);

/// Preferential-attachment remix network.
///
/// Designs d_1..d_n are created in order. d_1 is a root with random tags.
/// Each later design takes two parents with probability p_multi (one
/// otherwise; one when only a single earlier design exists), drawn without
/// replacement from earlier designs with weight (children + 1). It inherits
/// each distinct parent tag with probability p_inherit, then receives
/// uniformly drawn new tags until it has tags_per_design (capped by the
/// pool size). Ids are `d` plus a zero-padded sequence number, so id order
/// equals creation order. Identical configs give identical graphs on every
/// platform.
LineageGraph generate(const SynthConfig& config);

} // namespace remixgraph::synth
