// Copyright 2026 The Compulse Authors
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

#include "compulse/bench.hpp"
#include "compulse/closed_form.hpp"
#include "compulse/common.hpp"
#include "compulse/continuation.hpp"
#include "compulse/groebner.hpp"
#include "compulse/io.hpp"
#include "compulse/newton.hpp"
#include "compulse/phase_algebra.hpp"
#include "compulse/polyroots.hpp"
#include "compulse/root_search.hpp"
#include "compulse/su2.hpp"
#include "compulse/transforms.hpp"
