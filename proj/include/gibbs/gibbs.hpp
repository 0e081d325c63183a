#pragma once

#include "gibbs/caps.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/estimators.hpp"
#include "gibbs/integer_matrix.hpp"
#include "gibbs/integrate.hpp"
#include "gibbs/measure.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/preimage_tree.hpp"
#include "gibbs/shift.hpp"
#include "gibbs/shift_point.hpp"
#include "gibbs/smith.hpp"
#include "gibbs/test_function.hpp"
#include "gibbs/toral.hpp"
#include "gibbs/torus_point.hpp"
