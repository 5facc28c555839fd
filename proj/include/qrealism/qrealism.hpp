#pragma once

// Umbrella header: the whole library.

#include "qrealism/channels.hpp"
#include "qrealism/density.hpp"
#include "qrealism/harness.hpp"
#include "qrealism/io.hpp"
#include "qrealism/linalg.hpp"
#include "qrealism/optimize.hpp"
#include "qrealism/parallel.hpp"
#include "qrealism/quantifiers.hpp"
#include "qrealism/rng.hpp"
#include "qrealism/states.hpp"
#include "qrealism/tomography.hpp"
