// SPDX-License-Identifier: Apache-2.0
//
// pcbeam: multiuser beamforming for partially-connected mmWave massive MIMO
// Copyright (C) 2026 the pcbeam contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "amm.hpp"
#include "amm_types.hpp"
#include "array.hpp"
#include "baselines.hpp"
#include "beamformer.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "experiment.hpp"
#include "metrics.hpp"
#include "pwmmse.hpp"
#include "system.hpp"
#include "wmmse.hpp"
