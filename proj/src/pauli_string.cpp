// Copyright 2026 The thermoprop Authors
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

#include "thermoprop/pauli_string.hpp"

namespace thermoprop {

PauliString PauliString::parse(std::string_view text) {
  PauliString p(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': break;
      case 'X': p.set(i, PauliOp::X); break;
      case 'Y': p.set(i, PauliOp::Y); break;
      case 'Z': p.set(i, PauliOp::Z); break;
      default:
        throw std::invalid_argument("PauliString::parse: unexpected character '" + std::string(1, text[i]) +
                                    "' at position " + std::to_string(i));
    }
  }
  return p;
}

std::string PauliString::to_string() const {
  static constexpr char kChars[] = {'I', 'X', 'Z', 'Y'};
  std::string out(n_, 'I');
  for (std::size_t i = 0; i < n_; ++i) out[i] = kChars[static_cast<unsigned>(at(i))];
  return out;
}

}  // namespace thermoprop
