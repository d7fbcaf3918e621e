#pragma once

#include "error.hpp"
#include "intfactor.hpp"
#include "numeric.hpp"
#include "poly.hpp"
#include "ideals.hpp"
#include "ellmodel.hpp"
#include "localdata.hpp"
#include "families.hpp"
#include "twinscan.hpp"
#include "serialize.hpp"
#include "verify.hpp"
