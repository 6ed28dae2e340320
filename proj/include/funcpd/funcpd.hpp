#pragma once

// Umbrella header: robust change-point detection for functional time
// series via two-sample U-statistics and a dependent wild bootstrap.

#include "funcpd/bootstrap.hpp"
#include "funcpd/core.hpp"
#include "funcpd/io.hpp"
#include "funcpd/kernels.hpp"
#include "funcpd/multiplier.hpp"
#include "funcpd/parallel.hpp"
#include "funcpd/reference.hpp"
#include "funcpd/rng.hpp"
#include "funcpd/simulate.hpp"
#include "funcpd/ustat.hpp"
#include "funcpd/version.hpp"
