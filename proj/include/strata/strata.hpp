#pragma once

// Umbrella header.

#include "strata/attack.hpp"
#include "strata/corpus.hpp"
#include "strata/embedding.hpp"
#include "strata/javaparse.hpp"
#include "strata/lexer.hpp"
#include "strata/method.hpp"
#include "strata/metrics.hpp"
#include "strata/rng.hpp"
#include "strata/subtoken.hpp"
#include "strata/surrogate.hpp"
#include "strata/svg.hpp"
#include "strata/sweep.hpp"
#include "strata/synth.hpp"
#include "strata/util.hpp"
#include "strata/vocab.hpp"
