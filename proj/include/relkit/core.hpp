// core.hpp -- alphabets, words, tuples, convolutions, shared error types.
#ifndef RELKIT_CORE_HPP
#define RELKIT_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace relkit {

// Symbols are indices into an Alphabet. Two sentinel values are used in
// convolution letters and in internal simulations; they are never members
// of an alphabet.
using Sym = int;
inline constexpr Sym kPad = -1;  // padding in convolution letters, printed "_"
inline constexpr Sym kEnd = -2;  // endmarker, printed "END"

using Word = std::vector<Sym>;          // finite word over an alphabet
using WordTuple = std::vector<Word>;    // one word per tape
using TupleLetter = std::vector<Sym>;   // one symbol per track (kPad allowed)
using ConvWord = std::vector<TupleLetter>;

// Thrown when a construction or search exceeds its configured budget.
// `needed` carries the exact bound that would be required when known.
struct BudgetError : std::runtime_error {
  long long needed = -1;
  explicit BudgetError(const std::string& what, long long needed_bound = -1)
      : std::runtime_error(what), needed(needed_bound) {}
};

// Thrown on malformed user input (files, CLI arguments, bad preconditions).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& name(Sym s) const { return letters_.at(static_cast<size_t>(s)); }
  const std::vector<std::string>& letters() const { return letters_; }

  // Index of a letter name, or nullopt if absent.
  std::optional<Sym> find(const std::string& name) const;
  // Index of a letter name; throws InputError if absent.
  Sym at(const std::string& name) const;

  // Appends a letter; throws InputError on duplicates.
  Sym add(const std::string& name);

  // Returns a name based on `base` that is not yet a letter ("b", "b1", ...).
  std::string fresh_name(const std::string& base) const;

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

  // Names that may never be alphabet letters (they have fixed meanings in
  // the text format and in the padded/end-marked semantics).
  static bool is_reserved(const std::string& name);
  // Character-level restrictions that keep the text format unambiguous.
  static bool is_valid_letter_name(const std::string& name);

 private:
  std::vector<std::string> letters_;
  std::unordered_map<std::string, Sym> index_;
};

// u*v^omega. period must be nonempty.
struct UpWord {
  Word prefix;
  Word period;
};

// Total length of a word tuple.
long long tuple_len(const WordTuple& u);

// Componentwise zip with kPad padding; inverse checks padding shape.
ConvWord convolve(const WordTuple& u);
WordTuple deconvolve(const ConvWord& w, int k);  // throws InputError if malformed

// Validity of a finite convolution word (padding only as a suffix per
// component, last letter not all-pad).
bool convolution_valid(const ConvWord& w, int k);

// Interleaves |I|-tuple u and (k-|I|)-tuple v into a k-tuple: positions in I
// (0-based, ascending) take components of u in order, the rest take v.
WordTuple odot(const std::vector<int>& I, int k, const WordTuple& u, const WordTuple& v);

// Projection of a k-tuple to the indices in I (ascending) / not in I.
WordTuple project(const std::vector<int>& I, const WordTuple& u);
WordTuple coproject(const std::vector<int>& I, int k, const WordTuple& u);

std::string word_to_string(const Alphabet& sigma, const Word& w, bool dot_separated);
std::string tuple_to_string(const Alphabet& sigma, const WordTuple& u);

}  // namespace relkit

#endif  // RELKIT_CORE_HPP
