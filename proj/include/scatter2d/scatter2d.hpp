#pragma once

#include "scatter2d/error.hpp"
#include "scatter2d/numerics.hpp"
#include "scatter2d/specfun.hpp"
#include "scatter2d/potential.hpp"
#include "scatter2d/quantum.hpp"
#include "scatter2d/classical.hpp"
#include "scatter2d/semiclassical.hpp"
