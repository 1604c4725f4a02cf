#pragma once

// Umbrella header.

#include "intercurve/cone.hpp"
#include "intercurve/cutoff.hpp"
#include "intercurve/doubling.hpp"
#include "intercurve/expr.hpp"
#include "intercurve/gluing.hpp"
#include "intercurve/metric.hpp"
#include "intercurve/presets.hpp"
#include "intercurve/run.hpp"
#include "intercurve/tensor.hpp"
