#ifndef EPIGRAPH_EPIGRAPH_HPP
#define EPIGRAPH_EPIGRAPH_HPP

#include "epigraph/binarize.hpp"
#include "epigraph/classify.hpp"
#include "epigraph/dataset.hpp"
#include "epigraph/errors.hpp"
#include "epigraph/features.hpp"
#include "epigraph/grayscale.hpp"
#include "epigraph/manifest.hpp"
#include "epigraph/model_io.hpp"
#include "epigraph/morphology.hpp"
#include "epigraph/pipeline.hpp"
#include "epigraph/pnm.hpp"
#include "epigraph/raster.hpp"
#include "epigraph/rng.hpp"
#include "epigraph/synth.hpp"

#endif  // EPIGRAPH_EPIGRAPH_HPP
