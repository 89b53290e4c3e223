#pragma once

#include "hypermatch/errors.hpp"
#include "hypermatch/extremal.hpp"
#include "hypermatch/hypergraph.hpp"
#include "hypermatch/optmatch.hpp"
#include "hypermatch/randcons.hpp"
#include "hypermatch/rational.hpp"
#include "hypermatch/rng.hpp"
#include "hypermatch/samuels.hpp"
#include "hypermatch/storage.hpp"
#include "hypermatch/thresholds.hpp"
