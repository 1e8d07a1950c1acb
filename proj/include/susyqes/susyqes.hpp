#pragma once

#include "susyqes/ces_engine.hpp"
#include "susyqes/errors.hpp"
#include "susyqes/generator.hpp"
#include "susyqes/grid.hpp"
#include "susyqes/pseudo_hermite.hpp"
#include "susyqes/quadrature.hpp"
#include "susyqes/spectral_oracle.hpp"
#include "susyqes/susy_core.hpp"
