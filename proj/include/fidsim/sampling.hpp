#pragma once

#include <cstddef>
#include <vector>

#include "fidsim/rng.hpp"

namespace fidsim {

/// A uniformly drawn M-subset of the N qubit pairs. Indices are kept
/// strictly increasing.
struct SampleSet {
  std::size_t n_pairs = 0;
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
};

/// Draws a sample set uniformly over all (N choose M) subsets,
/// deterministically given the stream state. Requires 1 <= m < n_pairs.
SampleSet draw_sample_set(std::size_t n_pairs, std::size_t m,
                          RandomStream& rng);

}  // namespace fidsim
