#include "chilqr/bfgs.hpp"

namespace chilqr {

Mat bfgs_update(const Mat& H, const Vec& s, const Vec& y) {
  double sy = s.dot(y);
  if (sy <= 1e-10 * s.norm() * y.norm()) return H;
  Vec Hs = H * s;
  double sHs = s.dot(Hs);
  if (sHs <= 0.0) return H;
  return H - (Hs * Hs.transpose()) / sHs + (y * y.transpose()) / sy;
}

}  // namespace chilqr
