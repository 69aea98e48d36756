/*
 * Copyright 2026 The venuerec Authors.
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

#pragma once

#include "venuerec/cluster.hpp"
#include "venuerec/config.hpp"
#include "venuerec/corpus.hpp"
#include "venuerec/error.hpp"
#include "venuerec/eval.hpp"
#include "venuerec/fusion.hpp"
#include "venuerec/index.hpp"
#include "venuerec/pipeline.hpp"
#include "venuerec/porter.hpp"
#include "venuerec/profile.hpp"
#include "venuerec/stages.hpp"
#include "venuerec/stopwords.hpp"
#include "venuerec/synthgen.hpp"
#include "venuerec/textprep.hpp"
