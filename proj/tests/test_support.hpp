#pragma once

#include <cstdint>

#include "qcont/states.hpp"

namespace testing {

inline qcont::Rng rng_for(std::uint64_t seed) { return qcont::Rng(qcont::mix_seed(seed, 0)); }

inline qcont::Matrix random_hermitian(int d, qcont::Rng& rng) {
  qcont::Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = qcont::complex_normal(rng);
  }
  return qcont::hermitian_part(m);
}

}  // namespace testing
