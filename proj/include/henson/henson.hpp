#pragma once

#include "henson/commands.hpp"
#include "henson/formula.hpp"
#include "henson/generate.hpp"
#include "henson/graph.hpp"
#include "henson/independence.hpp"
#include "henson/io.hpp"
#include "henson/oracle.hpp"
#include "henson/sequence.hpp"
