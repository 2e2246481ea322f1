#pragma once

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "numtheory.hpp"
#include "intervals.hpp"
#include "lattice.hpp"
#include "funcspace.hpp"
#include "content.hpp"
#include "instance.hpp"
#include "resonant.hpp"
#include "criteria.hpp"
#include "formulas.hpp"
#include "estimators.hpp"
#include "config.hpp"
#include "report.hpp"
#include "verify.hpp"
