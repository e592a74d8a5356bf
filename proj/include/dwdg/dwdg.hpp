// Umbrella header.
#pragma once

#include "dwdg/dg_calculus.hpp"
#include "dwdg/dg_space.hpp"
#include "dwdg/examples.hpp"
#include "dwdg/forms.hpp"
#include "dwdg/mesh.hpp"
#include "dwdg/ocp.hpp"
#include "dwdg/quadrature.hpp"
#include "dwdg/solve.hpp"
#include "dwdg/sparse.hpp"
#include "dwdg/sweep.hpp"
