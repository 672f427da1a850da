#include "mdlvq/parallel.hpp"

#include <omp.h>

namespace mdlvq {

int hardware_threads() { return omp_get_max_threads(); }

}  // namespace mdlvq
