#include "gsrc/velocity_grid.hpp"

#include <stdexcept>

namespace gsrc {

VelocitySets VelocitySets::defaults() {
  VelocitySets sets;
  for (int v = -5000; v <= 5000; v += 1000) {
    sets.x.push_back(v);
    sets.y.push_back(v);
  }
  sets.z.push_back(0.0);
  return sets;
}

void VelocitySets::validate() const {
  for (const auto* axis : {&x, &y, &z}) {
    if (axis->empty()) {
      throw std::invalid_argument("velocity set: axis must be non-empty");
    }
    for (std::size_t i = 1; i < axis->size(); ++i) {
      if (!((*axis)[i] > (*axis)[i - 1])) {
        throw std::invalid_argument("velocity set: values must be strictly ascending");
      }
    }
  }
}

ActionSpace::ActionSpace(VelocitySets sets) : sets_(std::move(sets)) {
  sets_.validate();
  size_ = static_cast<int>(sets_.x.size() * sets_.y.size() * sets_.z.size());
}

Vec3 ActionSpace::velocity(int index) const {
  if (index < 0 || index >= size_) {
    throw std::out_of_range("ActionSpace::velocity: index out of range");
  }
  const int nz = static_cast<int>(sets_.z.size());
  const int ny = static_cast<int>(sets_.y.size());
  const int iz = index % nz;
  const int iy = (index / nz) % ny;
  const int ix = index / (nz * ny);
  return {sets_.x[ix], sets_.y[iy], sets_.z[iz]};
}

}  // namespace gsrc
