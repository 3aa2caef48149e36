#pragma once

#include "helmsplit/error.hpp"
#include "helmsplit/kernel_params.hpp"
#include "helmsplit/specfun.hpp"
#include "helmsplit/quadrature.hpp"
#include "helmsplit/series.hpp"
#include "helmsplit/fourier_kernels.hpp"
#include "helmsplit/spatial3d.hpp"
#include "helmsplit/spatial2d.hpp"
#include "helmsplit/gaussian_repr.hpp"
#include "helmsplit/field.hpp"
#include "helmsplit/grid_apply.hpp"
