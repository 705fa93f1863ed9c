#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tailbound/oracle.hpp"

namespace tailbound {

// Instance files are JSON objects with a "type" discriminator:
//   {"type": "rademacher", "weights": [...]}
//   {"type": "bounded",    "weights": [...], "dists": [{"support": [...],
//                                                       "probs": [...]}, ...]}
//   {"type": "martingale", "weights": [...], "rule_seed": N}
//   {"type": "hilbert",    "vectors": [[...], ...], "dists": [...]}

struct RademacherInstance {
    WeightVector weights;
};

struct BoundedInstance {
    WeightVector weights;
    std::vector<DiscreteZeroMeanDistribution> dists;
};

struct MartingaleInstance {
    WeightVector weights;
    std::uint64_t rule_seed;
};

using Instance = std::variant<RademacherInstance, BoundedInstance,
                              MartingaleInstance, HilbertInstance>;

/// Raised on malformed instance JSON; the message names the offending field.
class InstanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Instance parse_instance_json(const std::string& text);
Instance load_instance_file(const std::string& path);

}  // namespace tailbound
