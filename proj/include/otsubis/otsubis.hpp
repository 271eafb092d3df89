#pragma once

#include "otsubis/analysis.hpp"
#include "otsubis/error.hpp"
#include "otsubis/histogram.hpp"
#include "otsubis/image.hpp"
#include "otsubis/report.hpp"
#include "otsubis/rootfind.hpp"
#include "otsubis/search.hpp"
#include "otsubis/synth.hpp"
#include "otsubis/variance.hpp"
