#pragma once

#include "telesim/analysis.hpp"
#include "telesim/closedform.hpp"
#include "telesim/environment.hpp"
#include "telesim/lindblad.hpp"
#include "telesim/matrix.hpp"
#include "telesim/pauli.hpp"
#include "telesim/teleport.hpp"
#include "telesim/tolerances.hpp"
#include "telesim/verify.hpp"
