#pragma once

#include "chilqr/cost.hpp"

namespace chilqr {

struct TaskSpec {
  Vec x0;
  int mode0 = 0;
  Vec x_goal;
  double t0 = 0.0;
  double tf = 0.0;
  int N = 0;
  CostWeights weights;
};

}  // namespace chilqr
