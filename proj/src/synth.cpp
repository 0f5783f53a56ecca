#include "remixgraph/synth.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "remixgraph/errors.hpp"
#include "remixgraph/random.hpp"

namespace remixgraph::synth {

namespace {

// Fenwick tree over integer weights supporting weighted index draws.
class WeightTree {
public:
    explicit WeightTree(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t i, std::int64_t delta) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
        total_ += delta;
    }

    std::int64_t total() const { return total_; }

    // Smallest index whose prefix sum exceeds `target`.
    std::size_t find(std::int64_t target) const {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 < tree_.size()) step *= 2;
        for (; step > 0; step /= 2) {
            if (pos + step < tree_.size() && tree_[pos + step] <= target) {
                pos += step;
                target -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::int64_t> tree_;
    std::int64_t total_ = 0;
};

std::string design_id(std::size_t seq, std::size_t width) {
    std::string digits = std::to_string(seq);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "d" + digits;
}

} // namespace

void validate(const SynthConfig& c) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (c.n == 0) throw InvalidConfig("n must be at least 1");
    if (!prob(c.p_multi)) throw InvalidConfig("p_multi must lie in [0, 1]");
    if (!prob(c.p_inherit)) throw InvalidConfig("p_inherit must lie in [0, 1]");
    if (c.tag_pool == 0) throw InvalidConfig("tag_pool must be positive");
    if (c.tags_per_design == 0) throw InvalidConfig("tags_per_design must be positive");
}

LineageGraph generate(const SynthConfig& config) {
    validate(config);
    Rng rng(config.seed);

    const std::size_t width = std::max<std::size_t>(6, std::to_string(config.n).size());
    const std::size_t target_tags = std::min(config.tags_per_design, config.tag_pool);
    const auto epoch_2012 = Timestamp{std::chrono::seconds{1325376000}};

    std::vector<std::string> tag_names(config.tag_pool);
    for (std::size_t t = 0; t < config.tag_pool; ++t) tag_names[t] = "tag-" + std::to_string(t);

    std::vector<std::vector<std::uint32_t>> tags(config.n);
    std::vector<std::string> ids(config.n);
    WeightTree weights(config.n);
    LineageGraph graph;

    for (std::size_t i = 0; i < config.n; ++i) {
        ids[i] = design_id(i + 1, width);

        std::vector<std::size_t> parents;
        if (i > 0) {
            const bool wants_two = rng.bernoulli(config.p_multi);
            const std::size_t count = (wants_two && i >= 2) ? 2 : 1;
            for (std::size_t k = 0; k < count; ++k) {
                const auto pick = weights.find(static_cast<std::int64_t>(rng.below(weights.total())));
                parents.push_back(pick);
                // exclude it from the next draw
                weights.add(pick, -(static_cast<std::int64_t>(graph.child_indices(pick).size()) + 1));
            }
            for (auto p : parents) weights.add(p, static_cast<std::int64_t>(graph.child_indices(p).size()) + 1);
        }

        auto& own = tags[i];
        std::vector<std::uint32_t> inheritable;
        for (auto p : parents) inheritable.insert(inheritable.end(), tags[p].begin(), tags[p].end());
        std::sort(inheritable.begin(), inheritable.end());
        inheritable.erase(std::unique(inheritable.begin(), inheritable.end()), inheritable.end());
        for (auto t : inheritable) {
            if (rng.bernoulli(config.p_inherit)) own.push_back(t);
        }
        while (own.size() < target_tags) {
            const auto t = static_cast<std::uint32_t>(rng.below(config.tag_pool));
            if (std::find(own.begin(), own.end(), t) == own.end()) own.push_back(t);
        }
        std::sort(own.begin(), own.end());

        Design d{DesignId(ids[i])};
        d.title = "design " + std::to_string(i + 1);
        d.author = "maker-" + std::to_string(i % 50);
        d.created_at = epoch_2012 + std::chrono::minutes{static_cast<std::int64_t>(i)};
        std::vector<std::string> names;
        for (auto t : own) names.push_back(tag_names[t]);
        d.tags = TagSet::from_normalized(std::move(names));
        for (auto p : parents) d.parent_ids.emplace_back(ids[p]);
        graph.add_design(std::move(d));

        weights.add(i, 1);
        for (auto p : parents) weights.add(p, 1);
    }
    return graph;
}

} // namespace remixgraph::synth
