#pragma once

// Umbrella header for the rfmatch library.

#include "rfmatch/analysis.hpp"
#include "rfmatch/components.hpp"
#include "rfmatch/linalg.hpp"
#include "rfmatch/matching_network.hpp"
#include "rfmatch/netlist.hpp"
#include "rfmatch/solver.hpp"
#include "rfmatch/tuner.hpp"
