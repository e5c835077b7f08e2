#pragma once

#include "rational.hpp"
#include "valuation.hpp"
#include "context.hpp"
#include "ghost_series.hpp"
#include "polygon.hpp"
#include "slopes.hpp"
#include "prediction.hpp"
#include "wedge.hpp"
#include "distribution.hpp"
#include "parallel.hpp"
#include "render.hpp"
