#pragma once

#include "sphereflock/checks.hpp"
#include "sphereflock/config.hpp"
#include "sphereflock/diagnostics.hpp"
#include "sphereflock/dynamics.hpp"
#include "sphereflock/ensemble.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/io.hpp"
#include "sphereflock/parallel.hpp"
#include "sphereflock/random.hpp"
#include "sphereflock/scenarios.hpp"
#include "sphereflock/vec.hpp"
#include "sphereflock/weight.hpp"
