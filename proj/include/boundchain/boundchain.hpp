#pragma once

#include "boundchain/bounds.hpp"
#include "boundchain/cftp.hpp"
#include "boundchain/graph.hpp"
#include "boundchain/keyed_random.hpp"
#include "boundchain/model.hpp"
#include "boundchain/models/coloring.hpp"
#include "boundchain/models/hardcore.hpp"
#include "boundchain/models/permutation.hpp"
#include "boundchain/models/potts.hpp"
#include "boundchain/models/sinkfree.hpp"
#include "boundchain/oracle.hpp"
#include "boundchain/theory.hpp"
