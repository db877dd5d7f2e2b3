#pragma once

#include "hameig/catalog.hpp"
#include "hameig/config.hpp"
#include "hameig/emit.hpp"
#include "hameig/envelope.hpp"
#include "hameig/errors.hpp"
#include "hameig/expr.hpp"
#include "hameig/green_kernel.hpp"
#include "hameig/grid_function.hpp"
#include "hameig/hammerstein.hpp"
#include "hameig/hypothesis_checks.hpp"
#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"
#include "hameig/rational_enum.hpp"
#include "hameig/solver.hpp"
#include "hameig/svg.hpp"
