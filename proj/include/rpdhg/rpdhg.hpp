// Copyright 2026 The rpdhg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "rpdhg/certify.hpp"
#include "rpdhg/combinatorics.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/io.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/normalized_gap.hpp"
#include "rpdhg/pdhg_solver.hpp"
#include "rpdhg/sparse_matrix.hpp"
#include "rpdhg/tu_toolkit.hpp"
