// hardycheck.hpp
// Umbrella header.

#pragma once

#include "hardycheck/core.hpp"
#include "hardycheck/qstate.hpp"
#include "hardycheck/ledger.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/discrimination.hpp"
#include "hardycheck/postselect.hpp"
#include "hardycheck/sweep.hpp"
#include "hardycheck/wxhh.hpp"
#include "hardycheck/simplex.hpp"
#include "hardycheck/lhv.hpp"
#include "hardycheck/json_io.hpp"
