#ifndef BOOSTRP_BOOSTRP_HPP
#define BOOSTRP_BOOSTRP_HPP

// Multi-output gradient tree boosting with random output projections.

#include "boostrp/benchmark.hpp"
#include "boostrp/boosting.hpp"
#include "boostrp/brent.hpp"
#include "boostrp/data.hpp"
#include "boostrp/error.hpp"
#include "boostrp/losses.hpp"
#include "boostrp/metrics.hpp"
#include "boostrp/model_io.hpp"
#include "boostrp/projections.hpp"
#include "boostrp/random.hpp"
#include "boostrp/synthetic.hpp"
#include "boostrp/tree.hpp"

#endif  // BOOSTRP_BOOSTRP_HPP
