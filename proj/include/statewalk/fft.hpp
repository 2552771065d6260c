// Copyright 2026 The Statewalk Authors
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

#pragma once

#include "statewalk/hilbert.hpp"

namespace statewalk::fft {

/// Unitary DFT, c~_j = n^{-1/2} sum_k c_k exp(-2 pi i j k / n).
/// Frequencies come out in FFTW order: j = 0, 1, ..., n/2-1, -n/2, ..., -1.
StateVector forward(const StateVector &in);

/// Inverse of forward (also unitary).
StateVector inverse(const StateVector &in);

/// In-place transforms along one axis of a state laid out as a row-major
/// array with `count` rows of length `n` and the transformed axis
/// strided by `stride` (stride 1 = innermost axis).
void forward_axis(StateVector &data, int n, int count, int stride);
void inverse_axis(StateVector &data, int n, int count, int stride);

}  // namespace statewalk::fft
