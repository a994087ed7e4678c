#pragma once

// Umbrella header.

#include "spinwitness/matrix.hpp"
#include "spinwitness/qmat.hpp"
#include "spinwitness/rng.hpp"
#include "spinwitness/parallel.hpp"
#include "spinwitness/states.hpp"
#include "spinwitness/collective.hpp"
#include "spinwitness/pairwise.hpp"
#include "spinwitness/triple.hpp"
#include "spinwitness/simple_wit.hpp"
#include "spinwitness/tomo.hpp"
#include "spinwitness/qdm.hpp"
#include "spinwitness/cli.hpp"
