#pragma once

#include "expord/errors.hpp"
#include "expord/experiment.hpp"
#include "expord/lp.hpp"
#include "expord/matrix.hpp"
#include "expord/moralhazard.hpp"
#include "expord/oracle.hpp"
#include "expord/orders.hpp"
#include "expord/rational.hpp"
#include "expord/rng.hpp"
