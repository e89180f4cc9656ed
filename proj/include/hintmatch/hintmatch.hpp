#pragma once

#include "hintmatch/centralized.hpp"
#include "hintmatch/decentralized.hpp"
#include "hintmatch/engine.hpp"
#include "hintmatch/error.hpp"
#include "hintmatch/estimation.hpp"
#include "hintmatch/examples.hpp"
#include "hintmatch/experiment.hpp"
#include "hintmatch/firm_policy.hpp"
#include "hintmatch/generate.hpp"
#include "hintmatch/hinted_bandits.hpp"
#include "hintmatch/io.hpp"
#include "hintmatch/market.hpp"
#include "hintmatch/metrics.hpp"
#include "hintmatch/rng.hpp"
#include "hintmatch/stable.hpp"
