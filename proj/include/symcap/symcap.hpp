#pragma once

#include "symcap/asymptotics.hpp"
#include "symcap/bounds.hpp"
#include "symcap/capacities.hpp"
#include "symcap/domain.hpp"
#include "symcap/ech_index.hpp"
#include "symcap/geometry.hpp"
#include "symcap/lattice_paths.hpp"
#include "symcap/rational.hpp"
#include "symcap/ruelle.hpp"
#include "symcap/weights.hpp"
