/*
 * Copyright 2026 The confgen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CONFGEN_CONFGEN_HPP_
#define CONFGEN_CONFGEN_HPP_

#include "confgen/admissibility.hpp"
#include "confgen/calibrate.hpp"
#include "confgen/error.hpp"
#include "confgen/eval.hpp"
#include "confgen/extended_lambda.hpp"
#include "confgen/infer.hpp"
#include "confgen/selection.hpp"
#include "confgen/step_function.hpp"

#endif  // CONFGEN_CONFGEN_HPP_
