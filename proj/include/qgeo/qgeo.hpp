#pragma once

// Umbrella header for the whole library.

#include "qgeo/eig.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/estimation.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/model.hpp"
#include "qgeo/protocol.hpp"
#include "qgeo/random_models.hpp"
#include "qgeo/rng.hpp"
