#pragma once

// Umbrella header.

#include <catenoid/error.hpp>
#include <catenoid/geometry.hpp>
#include <catenoid/fields.hpp>
#include <catenoid/linalg.hpp>
#include <catenoid/sturm_liouville.hpp>
#include <catenoid/surface_function.hpp>
#include <catenoid/quadratic_forms.hpp>
#include <catenoid/random.hpp>
#include <catenoid/parallel.hpp>
#include <catenoid/index_engine.hpp>
#include <catenoid/verification.hpp>
#include <catenoid/report.hpp>
