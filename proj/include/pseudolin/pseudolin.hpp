#pragma once

#include "pseudolin/bounds.hpp"
#include "pseudolin/ec_finite.hpp"
#include "pseudolin/ec_rational.hpp"
#include "pseudolin/errors.hpp"
#include "pseudolin/heights.hpp"
#include "pseudolin/interval.hpp"
#include "pseudolin/io.hpp"
#include "pseudolin/numtheory.hpp"
#include "pseudolin/parallel.hpp"
#include "pseudolin/pseudolinear.hpp"
#include "pseudolin/reduction.hpp"
#include "pseudolin/torsion.hpp"
