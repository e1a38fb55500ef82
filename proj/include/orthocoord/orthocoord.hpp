#pragma once

#include "orthocoord/certificates.hpp"
#include "orthocoord/chart_io.hpp"
#include "orthocoord/curvature_core.hpp"
#include "orthocoord/diagonal_metrics.hpp"
#include "orthocoord/error.hpp"
#include "orthocoord/json_io.hpp"
#include "orthocoord/obstruction_search.hpp"
#include "orthocoord/random.hpp"
#include "orthocoord/tensor.hpp"
