// Copyright 2026 The iris-sim Authors
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

#ifndef IRIS_IRIS_HPP_
#define IRIS_IRIS_HPP_

#include "iris/align.hpp"
#include "iris/curves.hpp"
#include "iris/data.hpp"
#include "iris/errors.hpp"
#include "iris/hardening.hpp"
#include "iris/image.hpp"
#include "iris/imager.hpp"
#include "iris/layout.hpp"
#include "iris/manifest.hpp"
#include "iris/optics.hpp"
#include "iris/pgm.hpp"
#include "iris/rng.hpp"
#include "iris/verify.hpp"

#endif  // IRIS_IRIS_HPP_
