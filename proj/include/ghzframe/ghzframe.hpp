#pragma once

#include "ghzframe/core.hpp"
#include "ghzframe/games.hpp"
#include "ghzframe/protocols.hpp"
#include "ghzframe/rng.hpp"
#include "ghzframe/states.hpp"
#include "ghzframe/tasks.hpp"
