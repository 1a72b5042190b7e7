#pragma once

/// Umbrella header for the nctorus library.

#include "rational.hpp"
#include "phasepoly.hpp"
#include "lattice.hpp"
#include "params.hpp"
#include "symbolic.hpp"
#include "models.hpp"
#include "verify.hpp"
#include "util.hpp"
#include "bloch.hpp"
#include "repn.hpp"
#include "closure.hpp"
#include "artifacts.hpp"
