#pragma once

/// Umbrella header.

#include "meanzero/bounds.hpp"
#include "meanzero/extremal.hpp"
#include "meanzero/kfunctional.hpp"
#include "meanzero/piecewise_linear.hpp"
#include "meanzero/quadrature.hpp"
#include "meanzero/report.hpp"
#include "meanzero/sampling.hpp"
#include "meanzero/search.hpp"
#include "meanzero/sharp_bounds.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"
