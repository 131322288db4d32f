#pragma once

// Convenience header pulling in the whole library.

#include "engcalc/cli.hpp"
#include "engcalc/config.hpp"
#include "engcalc/diffnum.hpp"
#include "engcalc/error.hpp"
#include "engcalc/funcexpr.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/lti.hpp"
#include "engcalc/mech.hpp"
#include "engcalc/odesolve.hpp"
#include "engcalc/odo.hpp"
#include "engcalc/opt.hpp"
#include "engcalc/poly.hpp"
#include "engcalc/quad.hpp"
#include "engcalc/signal.hpp"
#include "engcalc/svg.hpp"
