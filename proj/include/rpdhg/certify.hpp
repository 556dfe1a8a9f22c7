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

#include "rpdhg/certify/bounds.hpp"
#include "rpdhg/certify/hoffman.hpp"
#include "rpdhg/certify/linear_algebra_checks.hpp"
#include "rpdhg/certify/oracle.hpp"
#include "rpdhg/certify/projection.hpp"
#include "rpdhg/certify/sharpness.hpp"
