#pragma once

// Umbrella header.
#include "dirac/action.hpp"
#include "dirac/calculus.hpp"
#include "dirac/dirac_field.hpp"
#include "dirac/error.hpp"
#include "dirac/lindirac.hpp"
#include "dirac/poly.hpp"
#include "dirac/reduce.hpp"
#include "dirac/report.hpp"
#include "dirac/scenario.hpp"
#include "dirac/subspace.hpp"
