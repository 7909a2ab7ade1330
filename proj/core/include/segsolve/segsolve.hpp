#pragma once

#include "segsolve/benchmarks.hpp"
#include "segsolve/cdf.hpp"
#include "segsolve/economy.hpp"
#include "segsolve/equilibrium.hpp"
#include "segsolve/matching.hpp"
#include "segsolve/mcsim.hpp"
#include "segsolve/mechanisms.hpp"
#include "segsolve/parallel.hpp"
#include "segsolve/segregation.hpp"
#include "segsolve/sweep.hpp"
