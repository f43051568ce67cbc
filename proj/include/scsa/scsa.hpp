#pragma once

#include "scsa/cluster.hpp"
#include "scsa/color.hpp"
#include "scsa/enhance.hpp"
#include "scsa/hash.hpp"
#include "scsa/image_io.hpp"
#include "scsa/metrics.hpp"
#include "scsa/optimize.hpp"
#include "scsa/parallel.hpp"
#include "scsa/reconstruct.hpp"
#include "scsa/rng.hpp"
#include "scsa/spectral.hpp"
