#pragma once

#include "roby/analysis.hpp"
#include "roby/dataset.hpp"
#include "roby/distance.hpp"
#include "roby/error.hpp"
#include "roby/io/embeddings.hpp"
#include "roby/io/metrics_table.hpp"
#include "roby/io/report.hpp"
#include "roby/metrics.hpp"
#include "roby/normalize.hpp"
#include "roby/parallel.hpp"
#include "roby/synth.hpp"
