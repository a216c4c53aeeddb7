#pragma once

#include "lqtrack/matrix.hpp"

namespace lqtrack {

/// Shared linear dynamics: the leader runs x' = a x autonomously and every
/// follower runs x' = a x + b u.
struct AgentModel {
    Matrix a;
    Matrix b;
};

/// Quadratic performance data: state weight q (PSD), input weight r (PD),
/// the cost bound gamma to certify, and the initial-error ball radius.
struct CostSpec {
    Matrix q;
    Matrix r;
    double gamma = 0.0;
    double radius = 0.0;
};

} // namespace lqtrack
