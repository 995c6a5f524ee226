#pragma once

#include "baryiter/analysis.hpp"
#include "baryiter/corpus.hpp"
#include "baryiter/error.hpp"
#include "baryiter/expression.hpp"
#include "baryiter/interpolants.hpp"
#include "baryiter/optimise.hpp"
#include "baryiter/real.hpp"
#include "baryiter/root_search.hpp"
#include "baryiter/root_steps.hpp"
#include "baryiter/scalar.hpp"
#include "baryiter/trace.hpp"
#include "baryiter/weights.hpp"
