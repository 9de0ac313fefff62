#pragma once

#include "error.hpp"
#include "types.hpp"
#include "specfun.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "roots.hpp"
#include "waveform.hpp"
#include "exact_mf.hpp"
#include "closed_form.hpp"
#include "metrics.hpp"
#include "io.hpp"
