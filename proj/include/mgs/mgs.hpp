#pragma once

#include "analytics.hpp"
#include "experiments.hpp"
#include "fibonacci.hpp"
#include "gauge.hpp"
#include "interval.hpp"
#include "measures.hpp"
#include "polynomial.hpp"
#include "random.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "stats.hpp"
#include "version.hpp"
#include "word.hpp"
