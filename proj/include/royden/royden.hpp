#ifndef ROYDEN_ROYDEN_HPP
#define ROYDEN_ROYDEN_HPP

#include "royden/analytic.hpp"
#include "royden/galerkin.hpp"
#include "royden/gauge.hpp"
#include "royden/geometry.hpp"
#include "royden/hardy.hpp"
#include "royden/io.hpp"
#include "royden/laplace.hpp"

#endif
