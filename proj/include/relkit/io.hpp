// io.hpp -- line-oriented text format for automata: strict parsing with line
// numbers and round-trip-stable printing.
#ifndef RELKIT_IO_HPP
#define RELKIT_IO_HPP

#include <string>
#include <variant>

#include "relkit/automata.hpp"

namespace relkit {

using AnyAutomaton = std::variant<KTapeAutomaton, Mdfa, Nba, Dpa, IndependentKTape>;

// Parses one automaton from the text format. Header keyword selects the kind:
// `ktape` (det=0 -> KTapeAutomaton, det=1 -> Mdfa), `nba`, `dpa`, `indep`.
// Throws InputError with a line number on any malformed input.
AnyAutomaton parse_automaton(const std::string& text);
AnyAutomaton parse_automaton_file(const std::string& path);

std::string print_automaton(const KTapeAutomaton& a);
std::string print_automaton(const Mdfa& a);
std::string print_automaton(const Nba& a);
std::string print_automaton(const Dpa& a);
std::string print_automaton(const IndependentKTape& a);
std::string print_automaton(const AnyAutomaton& a);

// Parses a word written as concatenated letter names (greedy longest match)
// or as '.'-separated letter names. The empty string is the empty word.
Word parse_word(const Alphabet& sigma, const std::string& text);

// Parses "(<w1>,...,<wk>)" into a word tuple over sigma.
WordTuple parse_tuple(const Alphabet& sigma, const std::string& text, int k);

}  // namespace relkit

#endif  // RELKIT_IO_HPP
