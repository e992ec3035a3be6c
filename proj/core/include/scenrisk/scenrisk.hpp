#pragma once

#include "scenrisk/allocation.hpp"
#include "scenrisk/bimeasure.hpp"
#include "scenrisk/convexgeom.hpp"
#include "scenrisk/diagnostics.hpp"
#include "scenrisk/errors.hpp"
#include "scenrisk/instances.hpp"
#include "scenrisk/process.hpp"
#include "scenrisk/random.hpp"
#include "scenrisk/riskcore.hpp"
#include "scenrisk/scenario.hpp"
