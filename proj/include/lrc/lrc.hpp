// Copyright 2026 lrc project contributors
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

#include "lrc/experiment.hpp"
#include "lrc/gd.hpp"
#include "lrc/io.hpp"
#include "lrc/linear_operator.hpp"
#include "lrc/operators.hpp"
#include "lrc/problem.hpp"
#include "lrc/rate.hpp"
#include "lrc/rng.hpp"
#include "lrc/sampling_mask.hpp"
#include "lrc/suite.hpp"
#include "lrc/truncation.hpp"
#include "lrc/types.hpp"
#include "lrc/vec_ops.hpp"
#include "lrc/verify.hpp"
