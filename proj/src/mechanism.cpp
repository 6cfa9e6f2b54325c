#include "oncs/mechanism.hpp"

#include <stdexcept>

#include "oncs/decompose.hpp"

namespace oncs {

Rational AllocationVector::total() const {
  Rational sum(0);
  for (const Rational& s : shares) sum += s;
  return sum;
}

const AllocationVector& AllocationTrace::final() const {
  if (steps.empty()) throw std::logic_error("allocation trace is empty");
  return steps.back();
}

AllocationTrace allocate_01_stream(const CostFunction& c, const ArrivalOrder& order,
                                   const CoordinateRule& cd, bool cross_check) {
  const std::size_t ambient = std::size_t(c.universe().ambient_size());
  ShuffleState state(c);  // rejects non-0-1 functions
  AllocationTrace trace;
  trace.steps.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    state.insert_next(order[k], cd);
    if (cross_check) {
      const ImageOrdering fresh = shuffle(order.prefix(k + 1), c, cd);
      if (fresh.sequence != state.image().sequence) {
        throw std::logic_error("incremental image diverged from a from-scratch shuffle");
      }
    }
    ShareVector shares(ambient, Rational(0));
    if (state.image().marginal) shares[state.image().marginal->index] = Rational(1);
    trace.steps.push_back({state.arrived().players(), std::move(shares)});
  }
  return trace;
}

AllocationTrace allocate_general_stream(const CostFunction& c, const ArrivalOrder& order,
                                        const CoordinateRule& cd) {
  const ValidationReport validation = c.validate();
  if (!validation.ok()) {
    throw std::invalid_argument("cannot allocate for an invalid cost function: " +
                                validation.summary());
  }
  const std::size_t ambient = std::size_t(c.universe().ambient_size());
  AllocationTrace trace;
  trace.steps.reserve(order.size());
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const ArrivalOrder prefix = order.prefix(k);
    const Coalition arrived = prefix.players();
    ShareVector shares(ambient, Rational(0));
    // Every component's top value is hit at the full arrived set, so every
    // component has a marginal player who owes that component's weight.
    for (const WeightedComponent& wc : decompose(c.restricted(arrived)).components) {
      const ImageOrdering image = shuffle(prefix, wc.game, cd);
      if (!image.marginal) {
        throw std::logic_error("decomposition component without a marginal player");
      }
      shares[image.marginal->index] += wc.weight;
    }
    trace.steps.push_back({arrived, std::move(shares)});
  }
  return trace;
}

std::string_view mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::SFS:
      return "sfs";
    case MechanismKind::GSFS:
      return "gsfs";
    case MechanismKind::EGSFS:
      return "egsfs";
  }
  return "unknown";
}

AllocationTrace allocate_stream(const CostFunction& c, const ArrivalOrder& order,
                                const MechanismConfig& config, bool cross_check) {
  const CoordinateRule& cd = rule_for(config.cd);
  switch (config.kind) {
    case MechanismKind::SFS:
    case MechanismKind::GSFS:
      if (!c.is_zero_one()) {
        throw std::invalid_argument(
            std::string(mechanism_name(config.kind)) +
            " requires a 0-1 valued cost function; use egsfs for general games");
      }
      return allocate_01_stream(c, order, cd, cross_check);
    case MechanismKind::EGSFS:
      return allocate_general_stream(c, order, cd);
  }
  throw std::logic_error("unreachable mechanism kind");
}

}  // namespace oncs
