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

#include "statewalk/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace statewalk::fft {

namespace {

// Plans are cached per (size, sign). FFTW_ESTIMATE keeps planning
// deterministic and leaves the input untouched; FFTW_UNALIGNED lets one plan
// serve any buffer. Plan creation is serialized; execution via
// fftw_execute_dft on distinct buffers is thread-safe.
fftw_plan plan_for(int n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, scratch.data(), scratch.data(), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

void transform_inplace(Complex *data, int n, int sign) {
    fftw_plan plan = plan_for(n, sign);
    auto *raw = reinterpret_cast<fftw_complex *>(data);
    fftw_execute_dft(plan, raw, raw);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        data[k] *= scale;
    }
}

void transform_axis(StateVector &data, int n, int count, int stride, int sign) {
    if (stride == 1) {
        for (int row = 0; row < count; ++row) {
            transform_inplace(data.data() + static_cast<std::ptrdiff_t>(row) * n, n, sign);
        }
        return;
    }
    std::vector<Complex> line(static_cast<std::size_t>(n));
    // `count` lines in total, each touching elements base + k*stride; bases
    // are grouped in blocks of extent n*stride.
    const int block = n * stride;
    const int blocks = count / stride;
    for (int b = 0; b < blocks; ++b) {
        for (int offset = 0; offset < stride; ++offset) {
            const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(b) * block + offset;
            for (int k = 0; k < n; ++k) {
                line[static_cast<std::size_t>(k)] = data[base + static_cast<std::ptrdiff_t>(k) * stride];
            }
            transform_inplace(line.data(), n, sign);
            for (int k = 0; k < n; ++k) {
                data[base + static_cast<std::ptrdiff_t>(k) * stride] = line[static_cast<std::size_t>(k)];
            }
        }
    }
}

}  // namespace

StateVector forward(const StateVector &in) {
    StateVector out = in;
    transform_inplace(out.data(), static_cast<int>(out.size()), FFTW_FORWARD);
    return out;
}

StateVector inverse(const StateVector &in) {
    StateVector out = in;
    transform_inplace(out.data(), static_cast<int>(out.size()), FFTW_BACKWARD);
    return out;
}

void forward_axis(StateVector &data, int n, int count, int stride) {
    transform_axis(data, n, count, stride, FFTW_FORWARD);
}

void inverse_axis(StateVector &data, int n, int count, int stride) {
    transform_axis(data, n, count, stride, FFTW_BACKWARD);
}

}  // namespace statewalk::fft
