// Copyright 2026 The pruw authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/scheme.hpp"
#include "pruw/decode.hpp"
#include "pruw/permutation.hpp"
#include "pruw/coordinator.hpp"
#include "pruw/snapshot.hpp"
#include "pruw/database.hpp"
#include "pruw/user.hpp"
#include "pruw/exact.hpp"
#include "pruw/leakage.hpp"
#include "pruw/transcript.hpp"
#include "pruw/cost.hpp"
#include "pruw/simulation.hpp"
