// SPDX-License-Identifier: Apache-2.0
//
// hbf: hybrid beamforming structures and design algorithms
// Copyright (C) 2026 The hbf authors
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

#ifndef HBF_HBF_HPP
#define HBF_HBF_HPP

#include "hbf/analog.hpp"
#include "hbf/beamformer.hpp"
#include "hbf/channels.hpp"
#include "hbf/config.hpp"
#include "hbf/digital.hpp"
#include "hbf/dps.hpp"
#include "hbf/fps.hpp"
#include "hbf/hardware.hpp"
#include "hbf/rate.hpp"
#include "hbf/solvers.hpp"
#include "hbf/sps.hpp"
#include "hbf/types.hpp"

#endif
