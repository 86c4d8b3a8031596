#include "fidsim/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fidsim {

SampleSet draw_sample_set(std::size_t n_pairs, std::size_t m,
                          RandomStream& rng) {
  if (m < 1 || m >= n_pairs) {
    throw std::invalid_argument(
        "draw_sample_set: need 1 <= m < n_pairs");
  }
  // Partial Fisher-Yates: after m steps the prefix is a uniform m-subset.
  std::vector<std::size_t> pool(n_pairs);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.next_below(n_pairs - i);
    std::swap(pool[i], pool[j]);
  }
  SampleSet sample;
  sample.n_pairs = n_pairs;
  sample.indices.assign(pool.begin(), pool.begin() + static_cast<long>(m));
  std::sort(sample.indices.begin(), sample.indices.end());
  return sample;
}

}  // namespace fidsim
