/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "ifmon/ast.hpp"
#include "ifmon/generator.hpp"
#include "ifmon/ideal.hpp"
#include "ifmon/intervals.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/monitors.hpp"
#include "ifmon/oracle.hpp"
#include "ifmon/parser.hpp"
#include "ifmon/pretty.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"
