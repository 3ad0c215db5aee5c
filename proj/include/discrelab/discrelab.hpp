#pragma once

#include "discrelab/bessel.hpp"
#include "discrelab/densities.hpp"
#include "discrelab/engine.hpp"
#include "discrelab/experiments.hpp"
#include "discrelab/fit.hpp"
#include "discrelab/gauss_legendre.hpp"
#include "discrelab/io.hpp"
#include "discrelab/jittered.hpp"
#include "discrelab/parallel.hpp"
#include "discrelab/rng.hpp"
#include "discrelab/spectral.hpp"
#include "discrelab/torus.hpp"
