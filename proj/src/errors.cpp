#include "unireg/errors.hpp"

#include <utility>

namespace unireg {

ConvergenceError::ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                                   double gap)
    : std::runtime_error(what), last_iterate_(std::move(last_iterate)), gap_(gap) {}

}  // namespace unireg
