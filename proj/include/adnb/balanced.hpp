#pragma once

#include <vector>

#include "adnb/flownet.hpp"

namespace adnb {

struct SurplusVector {
  std::vector<Rational> theta;  // m_i minus flow on (i, t); 0 for inactive buyers
  std::vector<Rational> beta;   // theta - 1
  std::vector<bool> active;
};

struct BalancedFlow {
  Flow flow;
  SurplusVector surplus;
  std::size_t maxflows = 0;
};

SurplusVector surplus_of(const EqNetwork& net, const Flow& flow);

// Maximum flow minimizing the l2 norm of the surplus vector.
BalancedFlow balanced_flow(const EqNetwork& net);

enum class Property1Status { Holds, Violated, NotMaximum };

Property1Status verify_property1(const EqNetwork& net, const Flow& flow);

// x * f together with beta(x) = x * beta. Valid for 0 < x <= min over beta_i < 0 of -1/beta_i.
BalancedFlow scale_flow(const BalancedFlow& balanced, const Rational& x);

}  // namespace adnb
