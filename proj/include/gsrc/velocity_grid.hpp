#pragma once

#include <vector>

#include "gsrc/vec3.hpp"

namespace gsrc {

// Candidate command velocities per axis, strictly ascending.
struct VelocitySets {
  std::vector<double> x, y, z;

  static VelocitySets defaults();  // -5000..5000 m/s step 1000 in x/y, {0} in z
  void validate() const;
};

// Indexed enumeration of the velocity grid, x-major, then y, then z.
class ActionSpace {
 public:
  explicit ActionSpace(VelocitySets sets);

  int size() const { return size_; }
  Vec3 velocity(int index) const;
  const VelocitySets& sets() const { return sets_; }

 private:
  VelocitySets sets_;
  int size_;
};

}  // namespace gsrc
