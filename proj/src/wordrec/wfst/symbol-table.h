// wordrec/wfst/symbol-table.h

// Copyright 2026 The Wordrec Authors.
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

#ifndef WORDREC_WFST_SYMBOL_TABLE_H_
#define WORDREC_WFST_SYMBOL_TABLE_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace wordrec {

// Maps symbol strings to dense integer labels; id 0 is always epsilon.
// File format: one "symbol<TAB>id" line per symbol.
class SymbolTable {
 public:
  SymbolTable();

  // Adds the symbol if absent; returns its id either way.
  int AddSymbol(const std::string& symbol);
  void AddSymbol(const std::string& symbol, int id);

  int Find(const std::string& symbol) const;  // -1 when absent
  const std::string& Find(int id) const;      // throws on unknown id
  bool Contains(const std::string& symbol) const { return Find(symbol) >= 0; }

  int size() const { return static_cast<int>(id_to_symbol_.size()); }

  void Save(const std::string& path) const;
  static SymbolTable Load(const std::string& path);

 private:
  std::unordered_map<std::string, int> symbol_to_id_;
  std::vector<std::string> id_to_symbol_;
};

}  // namespace wordrec

#endif  // WORDREC_WFST_SYMBOL_TABLE_H_
