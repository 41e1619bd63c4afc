// Umbrella header.
#pragma once

#include "ahmass/field.hpp"
#include "ahmass/poly.hpp"
#include "ahmass/tensor.hpp"
#include "ahmass/linalg.hpp"
#include "ahmass/lorentz.hpp"
#include "ahmass/harmonic.hpp"
#include "ahmass/weylspace.hpp"
#include "ahmass/massaspect.hpp"
#include "ahmass/invariants.hpp"
#include "ahmass/charges.hpp"
#include "ahmass/verify.hpp"
