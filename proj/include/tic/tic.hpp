#pragma once

#include "tic/rational.hpp"
#include "tic/core.hpp"
#include "tic/solver.hpp"
#include "tic/mechanisms.hpp"
#include "tic/instance_gen.hpp"
#include "tic/audit.hpp"
