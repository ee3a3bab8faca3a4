#pragma once

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/exact.hpp"
#include "entmom/induced.hpp"
#include "entmom/laguerre.hpp"
#include "entmom/log_scaled.hpp"
#include "entmom/mc/estimator.hpp"
#include "entmom/mc/hermitian_jacobi.hpp"
#include "entmom/mc/philox.hpp"
#include "entmom/mc/sampler.hpp"
#include "entmom/quadrature.hpp"
#include "entmom/specfun.hpp"
#include "entmom/tsallis.hpp"
#include "entmom/von_neumann.hpp"
