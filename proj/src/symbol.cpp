#include "rcnu/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace rcnu {
namespace {

struct Interner {
  std::shared_mutex mutex;
  std::deque<std::string> texts{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> index{{std::string_view(), 0}};
};

Interner& interner() {
  static Interner instance;
  return instance;
}

}  // namespace

Name::Name(std::string_view text) {
  if (text.empty()) return;
  auto& in = interner();
  {
    std::shared_lock lock(in.mutex);
    if (auto it = in.index.find(text); it != in.index.end()) {
      id_ = it->second;
      return;
    }
  }
  std::unique_lock lock(in.mutex);
  if (auto it = in.index.find(text); it != in.index.end()) {
    id_ = it->second;
    return;
  }
  id_ = static_cast<std::uint32_t>(in.texts.size());
  in.texts.emplace_back(text);
  in.index.emplace(in.texts.back(), id_);
}

const std::string& Name::str() const {
  auto& in = interner();
  std::shared_lock lock(in.mutex);
  return in.texts[id_];
}

bool operator<(Name a, Name b) {
  if (a.id_ == b.id_) return false;
  return a.str() < b.str();
}

std::string display(Name n) { return n.is_epsilon() ? std::string(kEpsilonText) : n.str(); }

}  // namespace rcnu
