#pragma once

#include "restaurant/config_io.hpp"
#include "restaurant/joint_model.hpp"
#include "restaurant/model_core.hpp"
#include "restaurant/observation_belief.hpp"
#include "restaurant/planners.hpp"
#include "restaurant/reward.hpp"
#include "restaurant/rng.hpp"
#include "restaurant/scenarios.hpp"
#include "restaurant/sim_harness.hpp"
#include "restaurant/table_dynamics.hpp"
#include "restaurant/trace_io.hpp"
#include "restaurant/verify.hpp"
