#pragma once

#include "psmds/datasets.hpp"
#include "psmds/errors.hpp"
#include "psmds/evaluation.hpp"
#include "psmds/geodesic.hpp"
#include "psmds/io.hpp"
#include "psmds/linalg.hpp"
#include "psmds/objective.hpp"
#include "psmds/parallel.hpp"
#include "psmds/pattern_search.hpp"
#include "psmds/smacof.hpp"
#include "psmds/trace.hpp"
