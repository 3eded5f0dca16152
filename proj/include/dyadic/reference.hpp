#ifndef DYADIC_REFERENCE_HPP
#define DYADIC_REFERENCE_HPP

#include "dyadic/operators.hpp"

namespace dyadic {
namespace reference {

/// Serial, literal-definition evaluation of the operators: summation kinds
/// loop cube by cube adding coef(Q) avg_Q(f) on the covered cells, the
/// maximal kind scans every containing cube per cell.  Slow on purpose;
/// the tests pin the tree kernels against these, and the benchmark tool
/// compares their runtimes.
StepFunction apply(const OperatorSpec& op, const StepFunction& f);

} // namespace reference
} // namespace dyadic

#endif
