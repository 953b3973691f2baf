#pragma once

#include "gridups/combinatorics.hpp"
#include "gridups/complex.hpp"
#include "gridups/diagram.hpp"
#include "gridups/errors.hpp"
#include "gridups/gf2.hpp"
#include "gridups/homology.hpp"
#include "gridups/maps.hpp"
#include "gridups/monomial.hpp"
#include "gridups/parallel.hpp"
#include "gridups/rational.hpp"
#include "gridups/upsilon.hpp"
#include "gridups/verify.hpp"
