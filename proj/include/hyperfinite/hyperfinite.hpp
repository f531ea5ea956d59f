#pragma once

#include "hyperfinite/errors.hpp"
#include "hyperfinite/nsa.hpp"
#include "hyperfinite/hermite.hpp"
#include "hyperfinite/statespace.hpp"
#include "hyperfinite/operators.hpp"
#include "hyperfinite/dynamics.hpp"
#include "hyperfinite/worlds.hpp"
#include "hyperfinite/everett/frequency.hpp"
#include "hyperfinite/everett/sampling.hpp"
#include "hyperfinite/everett/randomness.hpp"
#include "hyperfinite/everett/continuous.hpp"
