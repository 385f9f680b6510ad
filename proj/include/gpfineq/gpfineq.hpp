#pragma once

// Convenience header pulling in the whole library.

#include "gpfineq/errors.hpp"
#include "gpfineq/special_functions.hpp"
#include "gpfineq/quadrature.hpp"
#include "gpfineq/function_spec.hpp"
#include "gpfineq/gpf_operator.hpp"
#include "gpfineq/inequalities.hpp"
#include "gpfineq/generators.hpp"
#include "gpfineq/campaign.hpp"
