//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_SRC_CRIPPEN_TABLE_HPP_
#define FORGE_SRC_CRIPPEN_TABLE_HPP_

#include <string_view>
#include <vector>

namespace forge::detail {

struct CrippenType {
  std::string_view type;
  std::string_view smarts;
  double logp;
};

const std::vector<CrippenType> &crippen_types();

}  // namespace forge::detail

#endif  // FORGE_SRC_CRIPPEN_TABLE_HPP_
