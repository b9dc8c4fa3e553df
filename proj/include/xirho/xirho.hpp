#pragma once

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/io.hpp"
#include "xirho/measures.hpp"
#include "xirho/numerics.hpp"
#include "xirho/oracle.hpp"
#include "xirho/rearrange.hpp"
#include "xirho/region.hpp"
