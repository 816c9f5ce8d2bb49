// Copyright 2026 The flip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header: every public module of the library.

#include "flip/allpass.hpp"
#include "flip/beta_mixture.hpp"
#include "flip/csv.hpp"
#include "flip/error.hpp"
#include "flip/forecast.hpp"
#include "flip/grid.hpp"
#include "flip/mc.hpp"
#include "flip/metrics.hpp"
#include "flip/phase.hpp"
#include "flip/pipeline.hpp"
#include "flip/rng.hpp"
#include "flip/series.hpp"
#include "flip/spectra.hpp"
#include "flip/var1.hpp"
