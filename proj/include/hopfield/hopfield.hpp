#pragma once

#include "hopfield/errors.hpp"
#include "hopfield/model.hpp"
#include "hopfield/gaussian_state.hpp"
#include "hopfield/correlations.hpp"
#include "hopfield/open_dynamics.hpp"
#include "hopfield/sweep.hpp"
#include "hopfield/verify.hpp"
