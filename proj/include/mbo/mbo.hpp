#pragma once

// Umbrella for the optimization library. The benchmark helpers live in
// mbo/bench/ and are included separately by the tools that need them.

#include "mbo/acqui/acquisition.hpp"
#include "mbo/bo/loop.hpp"
#include "mbo/config.hpp"
#include "mbo/core/box.hpp"
#include "mbo/core/rng.hpp"
#include "mbo/core/types.hpp"
#include "mbo/gp/hp_optimize.hpp"
#include "mbo/gp/kernel.hpp"
#include "mbo/gp/mean.hpp"
#include "mbo/gp/model.hpp"
#include "mbo/opt/inner.hpp"
