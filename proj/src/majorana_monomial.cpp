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

#include "thermoprop/majorana_monomial.hpp"

#include <charconv>

namespace thermoprop {

MajoranaMonomial MajoranaMonomial::from_indices(std::size_t n_generators, const std::vector<std::size_t>& indices) {
  MajoranaMonomial m(n_generators);
  for (auto idx : indices) {
    if (m.test(idx)) throw std::invalid_argument("MajoranaMonomial: repeated generator index");
    m.flip(idx);
  }
  return m;
}

MajoranaMonomial MajoranaMonomial::from_bits(std::string_view bits) {
  MajoranaMonomial m(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      m.flip(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("MajoranaMonomial::from_bits: expected '0' or '1'");
    }
  }
  return m;
}

MajoranaMonomial MajoranaMonomial::parse(std::size_t n_generators, std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "m{" || text.back() != '}') {
    throw std::invalid_argument("MajoranaMonomial::parse: expected m{...}");
  }
  MajoranaMonomial m(n_generators);
  std::string_view body = text.substr(2, text.size() - 3);
  while (!body.empty()) {
    auto comma = body.find(',');
    auto token = body.substr(0, comma);
    std::size_t label = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), label);
    if (ec != std::errc() || ptr != token.data() + token.size() || label == 0 || label > n_generators) {
      throw std::invalid_argument("MajoranaMonomial::parse: bad generator label '" + std::string(token) + "'");
    }
    if (m.test(label - 1)) throw std::invalid_argument("MajoranaMonomial::parse: repeated generator label");
    m.flip(label - 1);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) throw std::invalid_argument("MajoranaMonomial::parse: trailing comma");
  }
  return m;
}

std::vector<std::size_t> MajoranaMonomial::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < kWords; ++k) {
    std::uint64_t w = bits_[k];
    while (w != 0) {
      out.push_back(64 * k + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::string MajoranaMonomial::to_string() const {
  std::string out = "m{";
  bool first = true;
  for (auto idx : indices()) {
    if (!first) out += ',';
    out += std::to_string(idx + 1);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace thermoprop
