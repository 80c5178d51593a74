/*
 * Copyright 2026 The g1dbn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "g1dbn/core.hpp"
#include "g1dbn/error.hpp"
#include "g1dbn/eval.hpp"
#include "g1dbn/experiment.hpp"
#include "g1dbn/inference.hpp"
#include "g1dbn/oracle.hpp"
#include "g1dbn/regress.hpp"
#include "g1dbn/simulate.hpp"
#include "g1dbn/student_t.hpp"
