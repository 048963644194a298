#pragma once

#include "topometric/config.hpp"
#include "topometric/errors.hpp"
#include "topometric/experiment.hpp"
#include "topometric/fusion.hpp"
#include "topometric/geometry.hpp"
#include "topometric/io.hpp"
#include "topometric/metrics.hpp"
#include "topometric/odometry.hpp"
#include "topometric/rng.hpp"
#include "topometric/simulator.hpp"
#include "topometric/smoothing.hpp"
#include "topometric/topo_map.hpp"
