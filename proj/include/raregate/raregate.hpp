// Umbrella header: the whole library in one include.

#pragma once

#include "raregate/adders.hpp"
#include "raregate/bench.hpp"
#include "raregate/bitsim.hpp"
#include "raregate/core.hpp"
#include "raregate/evaluator.hpp"
#include "raregate/expr.hpp"
#include "raregate/format.hpp"
#include "raregate/netlist.hpp"
#include "raregate/optimizer.hpp"
#include "raregate/rareness.hpp"
#include "raregate/rng.hpp"
#include "raregate/sat.hpp"
#include "raregate/testgen.hpp"
#include "raregate/trojan.hpp"
