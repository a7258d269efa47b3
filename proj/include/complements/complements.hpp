// Copyright 2026 The Authors.
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

#include "complements/additive_bounds.hpp"
#include "complements/buyer.hpp"
#include "complements/check.hpp"
#include "complements/dicut.hpp"
#include "complements/errors.hpp"
#include "complements/instances.hpp"
#include "complements/item_set.hpp"
#include "complements/mechanisms.hpp"
#include "complements/model.hpp"
#include "complements/opt.hpp"
#include "complements/parallel.hpp"
#include "complements/rng.hpp"
#include "complements/simplex.hpp"
#include "complements/verify.hpp"
