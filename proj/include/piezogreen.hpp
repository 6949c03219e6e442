#ifndef PIEZOGREEN_HPP
#define PIEZOGREEN_HPP

#include "piezogreen/core.hpp"
#include "piezogreen/decoupled.hpp"
#include "piezogreen/field.hpp"
#include "piezogreen/greens.hpp"
#include "piezogreen/greens_matrix.hpp"
#include "piezogreen/io.hpp"
#include "piezogreen/kernels.hpp"
#include "piezogreen/linalg.hpp"
#include "piezogreen/material.hpp"
#include "piezogreen/oracle.hpp"
#include "piezogreen/sampling.hpp"
#include "piezogreen/spectrum.hpp"

#endif  // PIEZOGREEN_HPP
