#pragma once

#include "qwalk/density.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/initial_states.hpp"
#include "qwalk/io.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/thermodynamics.hpp"
#include "qwalk/transient.hpp"
#include "qwalk/version.hpp"
#include "qwalk/walker.hpp"
