// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hse/cs_analysis.hpp"
#include "hse/errors.hpp"
#include "hse/estimation.hpp"
#include "hse/experiment.hpp"
#include "hse/io.hpp"
#include "hse/linalg.hpp"
#include "hse/measurement.hpp"
#include "hse/network.hpp"
#include "hse/recovery.hpp"
#include "hse/rng.hpp"
#include "hse/sensing_design.hpp"
#include "hse/simplex.hpp"
