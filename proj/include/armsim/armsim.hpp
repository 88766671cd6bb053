#pragma once

#include "armsim/actuator.hpp"
#include "armsim/arm_model.hpp"
#include "armsim/config.hpp"
#include "armsim/control.hpp"
#include "armsim/csv.hpp"
#include "armsim/dynamics.hpp"
#include "armsim/ik.hpp"
#include "armsim/kinematics.hpp"
#include "armsim/metrics.hpp"
#include "armsim/rng.hpp"
#include "armsim/scenario_io.hpp"
#include "armsim/sim.hpp"
#include "armsim/svg.hpp"
#include "armsim/trajectory.hpp"
#include "armsim/types.hpp"
