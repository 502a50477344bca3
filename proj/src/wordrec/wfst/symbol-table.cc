// wordrec/wfst/symbol-table.cc

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

#include "wordrec/wfst/symbol-table.h"

#include <fstream>

#include "wordrec/common/error.h"

namespace wordrec {

SymbolTable::SymbolTable() { AddSymbol("<eps>", 0); }

int SymbolTable::AddSymbol(const std::string& symbol) {
  auto it = symbol_to_id_.find(symbol);
  if (it != symbol_to_id_.end()) return it->second;
  int id = static_cast<int>(id_to_symbol_.size());
  AddSymbol(symbol, id);
  return id;
}

void SymbolTable::AddSymbol(const std::string& symbol, int id) {
  if (id < 0) throw Error("ConfigError", "symbol ids must be non-negative");
  auto it = symbol_to_id_.find(symbol);
  if (it != symbol_to_id_.end()) {
    if (it->second != id) {
      throw Error("ConfigError", "symbol '" + symbol + "' remapped");
    }
    return;
  }
  if (static_cast<std::size_t>(id) >= id_to_symbol_.size()) {
    id_to_symbol_.resize(id + 1);
  }
  if (!id_to_symbol_[id].empty() && id_to_symbol_[id] != symbol) {
    throw Error("ConfigError",
                "id " + std::to_string(id) + " already bound to '" +
                    id_to_symbol_[id] + "'");
  }
  id_to_symbol_[id] = symbol;
  symbol_to_id_[symbol] = id;
}

int SymbolTable::Find(const std::string& symbol) const {
  auto it = symbol_to_id_.find(symbol);
  return it == symbol_to_id_.end() ? -1 : it->second;
}

const std::string& SymbolTable::Find(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_symbol_.size() ||
      id_to_symbol_[id].empty()) {
    throw Error("ConfigError", "unknown symbol id " + std::to_string(id));
  }
  return id_to_symbol_[id];
}

void SymbolTable::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  for (std::size_t id = 0; id < id_to_symbol_.size(); ++id) {
    if (!id_to_symbol_[id].empty() || id == 0) {
      os << id_to_symbol_[id] << '\t' << id << '\n';
    }
  }
}

SymbolTable SymbolTable::Load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  SymbolTable table;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("FormatError", "expected 'symbol<TAB>id': " + line);
    }
    table.AddSymbol(line.substr(0, tab), std::stoi(line.substr(tab + 1)));
  }
  return table;
}

}  // namespace wordrec
