// Copyright 2026 The ffcorr Authors
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

#include <cstddef>
#include <functional>

namespace ffcorr {

/// Worker count used when a caller passes 0: the FFCORR_THREADS environment
/// variable if set to a positive integer, otherwise hardware concurrency.
unsigned default_thread_count();

/// Runs body(chunk) for chunk in [0, chunks) on up to \p threads workers.
/// Work is split into caller-defined chunks so results never depend on the
/// worker count. The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t chunks, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace ffcorr
