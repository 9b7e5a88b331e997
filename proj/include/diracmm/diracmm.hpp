#pragma once

#include "diracmm/constants.hpp"
#include "diracmm/driver.hpp"
#include "diracmm/energy.hpp"
#include "diracmm/integrals.hpp"
#include "diracmm/matrix.hpp"
#include "diracmm/optimize.hpp"
#include "diracmm/radial.hpp"
#include "diracmm/rosicky_mark.hpp"

namespace diracmm {
inline constexpr const char *version = "0.1.0";
}
