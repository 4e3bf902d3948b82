#pragma once

#include "covsim/error.hpp"
#include "covsim/types.hpp"
#include "covsim/rounding.hpp"
#include "covsim/disease_model.hpp"
#include "covsim/interventions.hpp"
#include "covsim/spatial_spread.hpp"
#include "covsim/scenario.hpp"
#include "covsim/csv.hpp"
#include "covsim/data_io.hpp"
#include "covsim/scenario_store.hpp"
