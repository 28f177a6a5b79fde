// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "frag/apf.hpp"
#include "frag/enhance.hpp"
#include "frag/error.hpp"
#include "frag/fft.hpp"
#include "frag/grouping.hpp"
#include "frag/io.hpp"
#include "frag/metrics.hpp"
#include "frag/parallel.hpp"
#include "frag/pipeline.hpp"
#include "frag/schedule.hpp"
#include "frag/simulate.hpp"
#include "frag/spectral.hpp"
#include "frag/tensor.hpp"
