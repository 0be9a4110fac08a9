// Copyright 2026 The polyldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/erm/loss.hpp"
#include "polyldp/erm/minimizer.hpp"
#include "polyldp/experiment/config.hpp"
#include "polyldp/experiment/datasets.hpp"
#include "polyldp/experiment/oracle.hpp"
#include "polyldp/experiment/sweep.hpp"
#include "polyldp/highdim/dr_erm.hpp"
#include "polyldp/highdim/glm.hpp"
#include "polyldp/highdim/projection.hpp"
#include "polyldp/highdim/recovery.hpp"
#include "polyldp/highdim/width.hpp"
#include "polyldp/io/config.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/ldp/averaging.hpp"
#include "polyldp/ldp/discretized.hpp"
#include "polyldp/ldp/laplace.hpp"
#include "polyldp/ldp/one_bit.hpp"
#include "polyldp/poly/bernstein.hpp"
#include "polyldp/poly/chebyshev.hpp"
#include "polyldp/poly/monomial.hpp"
#include "polyldp/poly/trig.hpp"
#include "polyldp/protocol/partition.hpp"
#include "polyldp/protocol/simulator.hpp"
#include "polyldp/protocol/transcript.hpp"
#include "polyldp/query/marginals.hpp"
#include "polyldp/query/smooth.hpp"
#include "polyldp/query/summary.hpp"
