#include "delaystab/errors.hpp"

namespace delaystab {

DivergenceError::DivergenceError(std::int64_t step, std::size_t channel)
    : Error("non-finite value at step " + std::to_string(step) + ", channel " +
            std::to_string(channel)),
      step_(step),
      channel_(channel) {}

NonConvergenceError::NonConvergenceError(const std::string& what,
                                         std::vector<double> residual_history)
    : Error(what), history_(std::move(residual_history)) {}

ParseError::ParseError(const std::string& what, std::size_t byte_offset)
    : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"), offset_(byte_offset) {}

}  // namespace delaystab
