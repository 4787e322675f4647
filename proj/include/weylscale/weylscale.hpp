#pragma once

// Umbrella header.

#include "weylscale/bessel.hpp"
#include "weylscale/dynamics.hpp"
#include "weylscale/errors.hpp"
#include "weylscale/experiment.hpp"
#include "weylscale/galerkin.hpp"
#include "weylscale/grid.hpp"
#include "weylscale/kernels.hpp"
#include "weylscale/norms.hpp"
#include "weylscale/rng.hpp"
#include "weylscale/scalinglimit.hpp"
#include "weylscale/sectors.hpp"
#include "weylscale/serialize.hpp"
#include "weylscale/version.hpp"
#include "weylscale/weyl.hpp"
