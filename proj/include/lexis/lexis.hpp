#pragma once

#include "lexis/centrality.hpp"
#include "lexis/compression.hpp"
#include "lexis/dag.hpp"
#include "lexis/error.hpp"
#include "lexis/features.hpp"
#include "lexis/glexis.hpp"
#include "lexis/parallel.hpp"
#include "lexis/random.hpp"
#include "lexis/repeat_index.hpp"
#include "lexis/sequence.hpp"
#include "lexis/serialize.hpp"
#include "lexis/significance.hpp"
#include "lexis/suffix_array.hpp"
#include "lexis/synthetic.hpp"
