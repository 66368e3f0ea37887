#pragma once

#include "slrel/core/beta.hpp"
#include "slrel/core/error.hpp"
#include "slrel/core/fusion.hpp"
#include "slrel/core/opinion.hpp"
#include "slrel/core/opinion_json.hpp"
#include "slrel/core/trust.hpp"

#include "slrel/sim/fault.hpp"
#include "slrel/sim/geometry.hpp"
#include "slrel/sim/presets.hpp"
#include "slrel/sim/rng.hpp"
#include "slrel/sim/scenario_json.hpp"
#include "slrel/sim/simulator.hpp"
#include "slrel/sim/types.hpp"

#include "slrel/checks/ego_tests.hpp"
#include "slrel/checks/lanes.hpp"
#include "slrel/checks/map_test.hpp"
#include "slrel/checks/prediction.hpp"
#include "slrel/checks/prediction_test.hpp"

#include "slrel/estimator.hpp"
#include "slrel/fusion/evaluation.hpp"
#include "slrel/fusion/overall.hpp"

#include "slrel/app/commands.hpp"
#include "slrel/app/config.hpp"
#include "slrel/app/io.hpp"
