#pragma once

#include "nilmult/integer.hpp"
#include "nilmult/series.hpp"
#include "nilmult/intlinalg.hpp"
#include "nilmult/hall_basis.hpp"
#include "nilmult/nilgroup.hpp"
#include "nilmult/multiplier.hpp"
