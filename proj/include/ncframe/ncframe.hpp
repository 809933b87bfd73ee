#pragma once

#include "ncframe/algebra.hpp"
#include "ncframe/corpus.hpp"
#include "ncframe/decomposition.hpp"
#include "ncframe/error.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/json_io.hpp"
#include "ncframe/module.hpp"
#include "ncframe/optimize.hpp"
#include "ncframe/random.hpp"
#include "ncframe/selftest.hpp"
