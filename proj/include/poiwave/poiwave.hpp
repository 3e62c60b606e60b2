/*
Copyright 2026 The poiwave Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include "poiwave/baselines.hpp"
#include "poiwave/csv.hpp"
#include "poiwave/errors.hpp"
#include "poiwave/estimator.hpp"
#include "poiwave/experiments.hpp"
#include "poiwave/interval.hpp"
#include "poiwave/piecewise.hpp"
#include "poiwave/pointprocess.hpp"
#include "poiwave/risk.hpp"
#include "poiwave/rng.hpp"
#include "poiwave/signals.hpp"
#include "poiwave/wavelets.hpp"
