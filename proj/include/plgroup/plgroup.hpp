#pragma once

// Umbrella header.

#include "plgroup/error.hpp"
#include "plgroup/dyadic.hpp"
#include "plgroup/plmap.hpp"
#include "plgroup/omega.hpp"
#include "plgroup/thompson.hpp"
#include "plgroup/cocycle.hpp"
#include "plgroup/lattice.hpp"
#include "plgroup/subgroup.hpp"
#include "plgroup/decompose.hpp"
#include "plgroup/random.hpp"
#include "plgroup/certify.hpp"
