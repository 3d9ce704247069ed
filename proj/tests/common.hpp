#pragma once

#include <memory>

#include "hypb/profile.hpp"

namespace hypb::testing {

// The default-model profile is shared across suites; solving it is cheap
// but not free, and every suite wants the same one.
inline const std::shared_ptr<const RadialProfile>& ground_state_330() {
  static const auto profile =
      std::make_shared<const RadialProfile>(solve_ground_state(ModelParams{}));
  return profile;
}

}  // namespace hypb::testing
