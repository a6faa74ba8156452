#pragma once

// Anytime time series motif discovery with particle swarms.

#include "swarmmotif/types.hpp"
#include "swarmmotif/random.hpp"
#include "swarmmotif/series.hpp"
#include "swarmmotif/stats.hpp"
#include "swarmmotif/dissimilarity.hpp"
#include "swarmmotif/landscape.hpp"
#include "swarmmotif/motif_store.hpp"
#include "swarmmotif/swarm.hpp"
#include "swarmmotif/oracle.hpp"
#include "swarmmotif/harness.hpp"
