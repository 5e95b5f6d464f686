#pragma once

// Umbrella header.

#include "rare_union/core/events.hpp"
#include "rare_union/core/finite_pattern_model.hpp"
#include "rare_union/math/bivariate_normal.hpp"
#include "rare_union/math/quadrature.hpp"
#include "rare_union/math/random.hpp"
#include "rare_union/math/sobol.hpp"
#include "rare_union/math/special_functions.hpp"
#include "rare_union/math/statistics.hpp"
#include "rare_union/samplers/frailty.hpp"
#include "rare_union/samplers/gaussian.hpp"
#include "rare_union/samplers/laplace.hpp"
#include "rare_union/samplers/univariate.hpp"
#include "rare_union/models/dependence_model.hpp"
#include "rare_union/models/archimedean.hpp"
#include "rare_union/models/laplace.hpp"
#include "rare_union/models/normal.hpp"
#include "rare_union/models/factory.hpp"
#include "rare_union/estimators/result.hpp"
#include "rare_union/estimators/averagers.hpp"
#include "rare_union/estimators/estimators.hpp"
#include "rare_union/analysis/oracles.hpp"
#include "rare_union/analysis/efficiency.hpp"
#include "rare_union/harness/experiment.hpp"
