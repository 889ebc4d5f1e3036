#pragma once

#include "analysis.hpp"
#include "core.hpp"
#include "finite_difference.hpp"
#include "hypergeometric.hpp"
#include "io.hpp"
#include "modes.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "profiles.hpp"
#include "riccati.hpp"
