#include "diskdens/errors.hpp"

namespace diskdens {

OpenShellError::OpenShellError(int n, int lower, int upper)
    : std::runtime_error("N=" + std::to_string(n) + " is not a closed subshell; nearest valid N: " +
                         std::to_string(lower) + ", " + std::to_string(upper)),
      n_(n),
      lower_(lower),
      upper_(upper) {}

}  // namespace diskdens
