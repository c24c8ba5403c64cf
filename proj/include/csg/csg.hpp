#pragma once

#include "csg/numeric.hpp"
#include "csg/game.hpp"
#include "csg/lp.hpp"
#include "csg/matrix_game.hpp"
#include "csg/mdp.hpp"
#include "csg/qualitative.hpp"
#include "csg/improvement.hpp"
#include "csg/io.hpp"
