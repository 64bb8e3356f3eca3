#pragma once

#include "progvar/arith.hpp"
#include "progvar/characters.hpp"
#include "progvar/linnik.hpp"
#include "progvar/multfunc.hpp"
#include "progvar/pretentious.hpp"
#include "progvar/report.hpp"
#include "progvar/smooth.hpp"
#include "progvar/spectrum.hpp"
#include "progvar/variance.hpp"
