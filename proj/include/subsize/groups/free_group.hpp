#ifndef SUBSIZE_GROUPS_FREE_GROUP_HPP
#define SUBSIZE_GROUPS_FREE_GROUP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"

namespace subsize {

/// Freely reduced word. Symbol 2i is the i-th generator, 2i+1 its inverse, so
/// the inverse of symbol s is s ^ 1 and words compare lexicographically by
/// symbol code (a < A < b < B < ...).
struct Word
{
  std::vector<std::uint8_t> symbols;

  friend bool operator==(const Word &, const Word &) = default;
  friend auto operator<=>(const Word &, const Word &) = default;
};

/// Free group on `rank` generators written a, b, c, ...; upper case letters
/// are inverses. Enumerated by word length, then lexicographically.
class FreeGroup
{
public:
  using element_type = Word;

  struct hash
  {
    std::size_t operator()(const Word &w) const noexcept
    {
      std::size_t h = w.symbols.size();
      for (auto s : w.symbols)
        h = h * 1099511628211ULL ^ (s + 1);
      return h;
    }
  };

  explicit FreeGroup(unsigned rank) : rank_(rank)
  {
    if (rank < 1 || rank > 26)
      throw spec_error("free group rank must be in [1, 26]");
  }

  unsigned rank() const { return rank_; }
  unsigned alphabet() const { return 2 * rank_; }

  Word identity() const { return {}; }

  bool valid(const Word &w) const
  {
    for (std::size_t i = 0; i < w.symbols.size(); ++i) {
      if (w.symbols[i] >= alphabet())
        return false;
      if (i > 0 && w.symbols[i] == (w.symbols[i - 1] ^ 1))
        return false;
    }
    return true;
  }

  Word op(const Word &a, const Word &b) const
  {
    require(a);
    require(b);
    Word out = a;
    std::size_t i = 0;
    while (i < b.symbols.size() && !out.symbols.empty() &&
           out.symbols.back() == (b.symbols[i] ^ 1)) {
      out.symbols.pop_back();
      ++i;
    }
    out.symbols.insert(out.symbols.end(), b.symbols.begin() + static_cast<std::ptrdiff_t>(i),
                       b.symbols.end());
    return out;
  }

  Word inv(const Word &a) const
  {
    require(a);
    Word out;
    out.symbols.reserve(a.symbols.size());
    for (auto it = a.symbols.rbegin(); it != a.symbols.rend(); ++it)
      out.symbols.push_back(*it ^ 1);
    return out;
  }

  /// Number of reduced words of length exactly `len`.
  std::uint64_t count_of_length(std::size_t len) const
  {
    if (len == 0)
      return 1;
    unsigned __int128 c = alphabet();
    for (std::size_t i = 1; i < len; ++i) {
      c *= alphabet() - 1;
      if (c > kRankCap)
        return kRankCap;
    }
    return static_cast<std::uint64_t>(c);
  }

  /// Enumeration index; nullopt when it would not fit any window.
  std::optional<std::uint64_t> rank(const Word &w) const
  {
    if (!valid(w))
      return std::nullopt;
    const std::size_t len = w.symbols.size();
    unsigned __int128 r = 0;
    for (std::size_t l = 0; l < len; ++l) {
      r += count_of_length(l);
      if (r >= kRankCap)
        return std::nullopt;
    }
    for (std::size_t i = 0; i < len; ++i) {
      unsigned smaller = w.symbols[i];
      if (i > 0 && (w.symbols[i - 1] ^ 1U) < w.symbols[i])
        --smaller;
      unsigned __int128 block = 1;
      for (std::size_t k = i + 1; k < len; ++k) {
        block *= alphabet() - 1;
        if (block >= kRankCap)
          break;
      }
      r += block * smaller;
      if (r >= kRankCap)
        return std::nullopt;
    }
    return static_cast<std::uint64_t>(r);
  }

  std::vector<Word> enumerate(std::size_t n) const
  {
    std::vector<Word> out;
    out.reserve(n);
    Word cur;
    for (std::size_t len = 0; out.size() < n; ++len)
      extend(cur, len, out, n);
    return out;
  }

  Word parse(std::string_view text) const
  {
    Word w;
    for (char ch : text) {
      unsigned s;
      if (ch >= 'a' && ch <= 'z')
        s = 2U * static_cast<unsigned>(ch - 'a');
      else if (ch >= 'A' && ch <= 'Z')
        s = 2U * static_cast<unsigned>(ch - 'A') + 1;
      else
        throw malformed_element("bad free group letter '" + std::string(1, ch) + "'");
      if (s >= alphabet())
        throw malformed_element("letter '" + std::string(1, ch) + "' exceeds free group rank");
      w.symbols.push_back(static_cast<std::uint8_t>(s));
    }
    if (!valid(w))
      throw malformed_element("word \"" + std::string(text) + "\" is not freely reduced");
    return w;
  }

  std::string format(const Word &w) const
  {
    std::string s;
    for (auto sym : w.symbols)
      s.push_back(static_cast<char>((sym & 1 ? 'A' : 'a') + sym / 2));
    return s;
  }

  json to_json(const Word &w) const { return format(w); }

  Word from_json(const json &j) const
  {
    if (!j.is_string())
      throw malformed_element("free group element must be a word string, got " + j.dump());
    return parse(j.get<std::string>());
  }

  std::string name() const { return "free(" + std::to_string(rank_) + ")"; }
  json descriptor() const { return {{"kind", "free"}, {"rank", rank_}}; }

private:
  static constexpr std::uint64_t kRankCap = std::uint64_t{1} << 62;

  void require(const Word &w) const
  {
    if (!valid(w))
      throw malformed_element("non-canonical word \"" + format(w) + "\" for " + name());
  }

  void extend(Word &cur, std::size_t len, std::vector<Word> &out, std::size_t n) const
  {
    if (out.size() >= n)
      return;
    if (cur.symbols.size() == len) {
      out.push_back(cur);
      return;
    }
    for (unsigned s = 0; s < alphabet() && out.size() < n; ++s) {
      if (!cur.symbols.empty() && s == (cur.symbols.back() ^ 1U))
        continue;
      cur.symbols.push_back(static_cast<std::uint8_t>(s));
      extend(cur, len, out, n);
      cur.symbols.pop_back();
    }
  }

  unsigned rank_;
};

} // namespace subsize

#endif // SUBSIZE_GROUPS_FREE_GROUP_HPP
