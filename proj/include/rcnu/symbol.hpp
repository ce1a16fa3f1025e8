#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace rcnu {

// Interned identifier. Id 0 is the empty name, which doubles as the ordinary
// (uncolored) token component epsilon.
class Name {
 public:
  constexpr Name() = default;
  explicit Name(std::string_view text);

  static constexpr Name epsilon() { return Name(); }

  bool is_epsilon() const { return id_ == 0; }
  std::uint32_t id() const { return id_; }
  const std::string& str() const;

  friend bool operator==(Name a, Name b) { return a.id_ == b.id_; }
  // Lexicographic on the text so that iteration orders do not depend on the
  // order in which names were interned.
  friend bool operator<(Name a, Name b);
  friend bool operator!=(Name a, Name b) { return !(a == b); }
  friend bool operator>(Name a, Name b) { return b < a; }
  friend bool operator<=(Name a, Name b) { return !(b < a); }
  friend bool operator>=(Name a, Name b) { return !(a < b); }

 private:
  std::uint32_t id_ = 0;
};

// Text used when rendering epsilon in files and reports.
inline constexpr std::string_view kEpsilonText = "eps";

std::string display(Name n);

}  // namespace rcnu

template <>
struct std::hash<rcnu::Name> {
  std::size_t operator()(rcnu::Name n) const noexcept { return n.id(); }
};
