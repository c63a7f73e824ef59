#pragma once

#include "polarize/bench.hpp"
#include "polarize/debate.hpp"
#include "polarize/errors.hpp"
#include "polarize/generator.hpp"
#include "polarize/io.hpp"
#include "polarize/model.hpp"
#include "polarize/reduction.hpp"
#include "polarize/rng.hpp"
#include "polarize/solvers.hpp"
