#pragma once

#include "dsmqr/basis.hpp"
#include "dsmqr/geometry.hpp"
#include "dsmqr/harness.hpp"
#include "dsmqr/linalg.hpp"
#include "dsmqr/oracle.hpp"
#include "dsmqr/solver.hpp"
#include "dsmqr/spectral.hpp"
