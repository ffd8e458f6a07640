#pragma once

#include "bergman/analytic.hpp"
#include "bergman/carleson.hpp"
#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/io.hpp"
#include "bergman/kernels.hpp"
#include "bergman/norms.hpp"
#include "bergman/numeric.hpp"
#include "bergman/ode.hpp"
#include "bergman/operators.hpp"
#include "bergman/quadrature.hpp"
