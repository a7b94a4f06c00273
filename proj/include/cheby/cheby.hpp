#pragma once

#include "cheby/errors.hpp"
#include "cheby/numerics.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/functional.hpp"
#include "cheby/meandiff_bounds.hpp"
#include "cheby/cheb_bounds.hpp"
#include "cheby/parallel.hpp"
#include "cheby/sharpness.hpp"
