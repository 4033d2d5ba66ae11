#pragma once

#include "fivebar/angles.hpp"
#include "fivebar/atlas.hpp"
#include "fivebar/errors.hpp"
#include "fivebar/geometry.hpp"
#include "fivebar/kinematics.hpp"
#include "fivebar/marching_squares.hpp"
#include "fivebar/singularity.hpp"
#include "fivebar/union_find.hpp"
