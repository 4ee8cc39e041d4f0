#pragma once

// Umbrella header.

#include "quayside/busy_period.hpp"
#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"
#include "quayside/estimation.hpp"
#include "quayside/lst_inversion.hpp"
#include "quayside/published_tables.hpp"
#include "quayside/report.hpp"
#include "quayside/rng.hpp"
#include "quayside/scenario.hpp"
#include "quayside/sim_oracle.hpp"
#include "quayside/traffic.hpp"
#include "quayside/waiting_time.hpp"
