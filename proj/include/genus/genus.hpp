#pragma once

#include "genus/abmod.hpp"
#include "genus/arith.hpp"
#include "genus/commands.hpp"
#include "genus/dsl.hpp"
#include "genus/error.hpp"
#include "genus/heis.hpp"
#include "genus/matrix.hpp"
#include "genus/primeset.hpp"
#include "genus/rank1.hpp"
#include "genus/report.hpp"
#include "genus/sample.hpp"
#include "genus/smith.hpp"
