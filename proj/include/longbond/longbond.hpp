/**
 * @file longbond.hpp
 * @brief Convenience header pulling in the whole library
 */

#pragma once

#include "longbond/bonds.hpp"
#include "longbond/curve.hpp"
#include "longbond/errors.hpp"
#include "longbond/grid.hpp"
#include "longbond/math.hpp"
#include "longbond/mc.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"
#include "longbond/pricing.hpp"
#include "longbond/processes.hpp"
#include "longbond/rates.hpp"
#include "longbond/rng.hpp"
#include "longbond/strategy.hpp"
