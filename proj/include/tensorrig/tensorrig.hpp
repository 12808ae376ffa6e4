#pragma once

#include "completion.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "field.hpp"
#include "hypergraph.hpp"
#include "hypergraph_io.hpp"
#include "identifiability.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rigidity.hpp"
#include "smith.hpp"
