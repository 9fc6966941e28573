#pragma once

#include "ptres/error.hpp"
#include "ptres/types.hpp"
#include "ptres/specfun/gamma.hpp"
#include "ptres/specfun/airy.hpp"
#include "ptres/specfun/pcf.hpp"
#include "ptres/free_green.hpp"
#include "ptres/greens.hpp"
#include "ptres/residuals.hpp"
#include "ptres/resonance.hpp"
#include "ptres/matching.hpp"
#include "ptres/oracle.hpp"
#include "ptres/io.hpp"
#include "ptres/verify.hpp"
