#pragma once

#include "chilqr/types.hpp"

namespace chilqr {

// Rank-two BFGS update of a Hessian approximation. The update is skipped
// (H returned unchanged) when s'y <= 1e-10 ||s|| ||y||, which preserves
// positive definiteness under curvature failure.
Mat bfgs_update(const Mat& H, const Vec& s, const Vec& y);

}  // namespace chilqr
