// Copyright 2026 The qcap Authors
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

// Umbrella header.

#pragma once

#include "qcap/algebra.hpp"
#include "qcap/capacity.hpp"
#include "qcap/converse.hpp"
#include "qcap/core/channel.hpp"
#include "qcap/core/entropy.hpp"
#include "qcap/core/error.hpp"
#include "qcap/core/linalg.hpp"
#include "qcap/core/random.hpp"
#include "qcap/core/space.hpp"
#include "qcap/core/state.hpp"
#include "qcap/info.hpp"
#include "qcap/io.hpp"
#include "qcap/ki.hpp"
#include "qcap/optimize.hpp"
#include "qcap/tradeoff.hpp"
#include "qcap/typicality.hpp"
#include "qcap/verify.hpp"
