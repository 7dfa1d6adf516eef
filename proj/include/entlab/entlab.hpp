// Copyright 2026 The entlab Authors
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

// Umbrella header.
#pragma once

#include "entlab/errors.hpp"
#include "entlab/linalg.hpp"
#include "entlab/sparse.hpp"
#include "entlab/lanczos.hpp"
#include "entlab/rng.hpp"
#include "entlab/parallel.hpp"
#include "entlab/states.hpp"
#include "entlab/measures.hpp"
#include "entlab/random.hpp"
#include "entlab/mps.hpp"
#include "entlab/free_fermion.hpp"
#include "entlab/chains.hpp"
#include "entlab/kinetic.hpp"
