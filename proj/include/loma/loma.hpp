/**
 * Copyright 2026 The LOMA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "loma/config.hpp"
#include "loma/errors.hpp"
#include "loma/feature.hpp"
#include "loma/geometry.hpp"
#include "loma/image.hpp"
#include "loma/image_io.hpp"
#include "loma/pipeline.hpp"
#include "loma/preview.hpp"
#include "loma/report.hpp"
#include "loma/rng.hpp"
#include "loma/sampling.hpp"
#include "loma/tensor_io.hpp"
