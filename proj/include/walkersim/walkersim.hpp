#pragma once

#include "walkersim/cli_ops.hpp"
#include "walkersim/config_json.hpp"
#include "walkersim/controller.hpp"
#include "walkersim/csv.hpp"
#include "walkersim/errors.hpp"
#include "walkersim/gait_analysis.hpp"
#include "walkersim/gait_gen.hpp"
#include "walkersim/log.hpp"
#include "walkersim/plant.hpp"
#include "walkersim/pwad.hpp"
#include "walkersim/report.hpp"
#include "walkersim/rng.hpp"
#include "walkersim/sim.hpp"
#include "walkersim/stats.hpp"
#include "walkersim/svg_plot.hpp"
#include "walkersim/version.hpp"
