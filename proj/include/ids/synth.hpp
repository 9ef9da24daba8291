#pragma once

// Deterministic generator of NSL-KDD-layout sample files. Emits the
// standard 43-field comma-separated lines (41 features, label,
// difficulty) with the published train/test attack composition, so the
// full pipeline can be exercised at any scale without shipping the
// real dataset. Point the CLI at real KDDTrain+/KDDTest+ files for
// faithful results.

#include <cstdint>
#include <string>

namespace ids::synth {

struct Options {
    std::uint64_t seed = 7;
    // scales every per-attack row count; 1.0 reproduces the published
    // 125973/22544 train/test sizes
    double scale = 1.0;
};

void write_sample(const std::string& train_path, const std::string& test_path,
                  const Options& options);

}  // namespace ids::synth
