#pragma once

// Everything in one include.

#include "qroute/rational.hpp"
#include "qroute/graph.hpp"
#include "qroute/schedule.hpp"
#include "qroute/bounds.hpp"
#include "qroute/swap_router.hpp"
#include "qroute/sparse_router.hpp"
#include "qroute/tele_router.hpp"
#include "qroute/clifford.hpp"
