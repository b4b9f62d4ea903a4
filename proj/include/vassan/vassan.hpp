#pragma once

#include "vassan/compiler.hpp"
#include "vassan/core.hpp"
#include "vassan/decomposition.hpp"
#include "vassan/demonic.hpp"
#include "vassan/dsl.hpp"
#include "vassan/formulas.hpp"
#include "vassan/game.hpp"
#include "vassan/generators.hpp"
#include "vassan/graph.hpp"
#include "vassan/growth.hpp"
#include "vassan/growth_vector.hpp"
#include "vassan/io.hpp"
#include "vassan/lp.hpp"
#include "vassan/oracle.hpp"
#include "vassan/report.hpp"
#include "vassan/transform.hpp"
