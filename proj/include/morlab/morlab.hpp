#pragma once

#include "morlab/errors.hpp"
#include "morlab/grid.hpp"
#include "morlab/fft.hpp"
#include "morlab/spectral.hpp"
#include "morlab/weights.hpp"
#include "morlab/kernels.hpp"
#include "morlab/interaction.hpp"
#include "morlab/propagator.hpp"
#include "morlab/rational.hpp"
#include "morlab/exponents.hpp"
#include "morlab/observables.hpp"
#include "morlab/morawetz.hpp"
#include "morlab/morawetz_report.hpp"
#include "morlab/morawetz_extra.hpp"
#include "morlab/probes.hpp"
#include "morlab/scattering.hpp"
#include "morlab/ensemble.hpp"
#include "morlab/config.hpp"
#include "morlab/io.hpp"
#include "morlab/runner.hpp"
