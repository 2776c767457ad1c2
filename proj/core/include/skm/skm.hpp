#pragma once

#include "skm/bench_compare.hpp"
#include "skm/coefficients.hpp"
#include "skm/cpe.hpp"
#include "skm/dataio.hpp"
#include "skm/dataset.hpp"
#include "skm/divergences.hpp"
#include "skm/errors.hpp"
#include "skm/kcenter.hpp"
#include "skm/kernels.hpp"
#include "skm/meanshift.hpp"
#include "skm/parallel.hpp"
#include "skm/sparse_mean.hpp"
#include "skm/synthetic.hpp"
