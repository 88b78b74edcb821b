#pragma once

#include "shrinkcov/cov.hpp"
#include "shrinkcov/coverage.hpp"
#include "shrinkcov/csv.hpp"
#include "shrinkcov/error.hpp"
#include "shrinkcov/longrun.hpp"
#include "shrinkcov/normal.hpp"
#include "shrinkcov/panel.hpp"
#include "shrinkcov/portfolio.hpp"
#include "shrinkcov/rng.hpp"
#include "shrinkcov/shrinkage.hpp"
#include "shrinkcov/simulate.hpp"
