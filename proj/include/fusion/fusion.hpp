#pragma once

#include "fusion/error.hpp"
#include "fusion/cantor.hpp"
#include "fusion/automaton.hpp"
#include "fusion/ideal.hpp"
#include "fusion/gdelta.hpp"
#include "fusion/game.hpp"
#include "fusion/null_game.hpp"
#include "fusion/pc_game.hpp"
#include "fusion/unfolded.hpp"
