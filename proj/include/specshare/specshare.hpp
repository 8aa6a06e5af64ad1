#pragma once

// Umbrella header for the spectrum-sharing Cournot equilibrium engine.

#include "specshare/closed_form.hpp"
#include "specshare/errors.hpp"
#include "specshare/experiments.hpp"
#include "specshare/marginal.hpp"
#include "specshare/market.hpp"
#include "specshare/models.hpp"
#include "specshare/solver.hpp"
#include "specshare/version.hpp"
#include "specshare/welfare.hpp"
