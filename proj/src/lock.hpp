#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cone.hpp"
#include "netlist.hpp"

namespace locklab {

using KeyVector = std::vector<std::uint8_t>;

std::string key_to_string(const KeyVector& k);      // "0101", index 0 first
KeyVector key_from_bits(const std::string& bits);   // inverse of the above
KeyVector key_from_hex(const std::string& hex, std::size_t width);  // bit i = (value >> i) & 1
KeyVector key_from_code(std::uint32_t code, std::size_t width);
std::uint32_t key_to_code(const KeyVector& k);
KeyVector random_key(std::size_t width, std::uint64_t seed);

enum class Scheme { XorInsertion, AntiSat, CasLock, TtLock, SfllHd, Unknown };
const char* scheme_name(Scheme s);

// Which key indices feed which half of a locking block.
struct KeyBlockMap {
    std::vector<int> g;        // insertion key gates, or the g half
    std::vector<int> gbar;     // complementary half
    std::vector<int> restore;  // restore-unit keys (functionality stripping)
};

struct LockParams {
    int r = 0;                      // block input width
    std::vector<int> or_positions;  // cascade steps that are OR instead of AND
    int hd = 0;                     // Hamming distance of the perturb/restore units
    KeyVector pattern;              // protected input pattern
    std::vector<int> taps;          // data input indices wired into the block
};

// Name given to the i-th key input of a freshly locked circuit.
extern const std::string kKeyInputPrefix;

struct LockedCircuit {
    Circuit circuit;
    std::vector<std::string> data_inputs;
    std::vector<std::string> key_inputs;
    KeyVector correct_key;  // meaningful only when key_known
    bool key_known = false;
    Scheme scheme = Scheme::Unknown;
    LockParams params;
    KeyBlockMap blocks;
};

// Splices an XOR key gate onto the output net of order[i] for each of the
// first `count` entries; the gate is XNOR where the key bit is 1, so the
// correct key restores the original function. Inserting count+1 gates with
// a one-bit-longer key leaves the first count gates untouched.
LockedCircuit insert_key_gates(const Circuit& c, std::size_t count,
                               const std::vector<std::size_t>& order, const KeyVector& key);

// Point-function block on `r` tapped data inputs (defaults to the first r):
// g is an AND cascade over x XOR kg, gbar the complemented cascade over
// x XOR kgbar, and AND(g, gbar) is XORed into the single output. Keys with
// kg = kgbar leave the function intact. `value` sets both halves.
LockedCircuit lock_antisat(const Circuit& c, int r, const KeyVector& value,
                           std::vector<int> taps = {});

// Same shape with OR gates at the given cascade steps (1..r-1); the mirror
// block keeps the step kinds and complements the final gate, so g AND gbar
// is identically zero under any kg = kgbar.
LockedCircuit lock_caslock(const Circuit& c, int r, const std::vector<int>& or_positions,
                           const KeyVector& value, std::vector<int> taps = {});

// Functionality stripping: a key-free perturb unit flips the output on the
// rows at Hamming distance exactly `hd` from `pattern`, and a keyed restore
// unit flips it back wherever the input is at distance `hd` from the key.
// The correct key equals the pattern. hd = 0 is plain pattern matching.
LockedCircuit lock_sfll_hd(const Circuit& c, const KeyVector& pattern, int hd);

// Substitutes key constants and folds them through the netlist; the result
// has only the data inputs left.
Circuit apply_key(const LockedCircuit& lc, const KeyVector& key);

// Partitions an existing circuit's inputs by key name prefix. The correct
// key and scheme are unknown for circuits loaded this way.
LockedCircuit locked_from_circuit(const Circuit& c,
                                  const std::string& key_prefix = kKeyInputPrefix);

} // namespace locklab
