#pragma once

#include "bounds.hpp"
#include "clocks.hpp"
#include "core.hpp"
#include "evolve.hpp"
#include "experiment.hpp"
#include "fourier.hpp"
#include "ham_model.hpp"
#include "io.hpp"
#include "lemma_checks.hpp"
#include "params.hpp"
#include "pipeline.hpp"
#include "protocols.hpp"
#include "smoothing.hpp"
