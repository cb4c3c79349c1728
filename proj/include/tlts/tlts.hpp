#pragma once

// Transformed-linear regularly-varying time series: model construction,
// simulation, tail-pairwise-dependence estimation, marginal transformation,
// least-squares fitting and tail diagnostics. All series have tail index 2.

#include "tlts/angular.hpp"
#include "tlts/arma.hpp"
#include "tlts/diagnostics.hpp"
#include "tlts/errors.hpp"
#include "tlts/estimate.hpp"
#include "tlts/fit.hpp"
#include "tlts/io.hpp"
#include "tlts/marginal.hpp"
#include "tlts/random.hpp"
#include "tlts/simulate.hpp"
#include "tlts/stats.hpp"
#include "tlts/transformed.hpp"
