#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exact_asm/spec.hpp"

// Worked examples: the selection-sort machine, the three-flag program with
// its hand-written behavior table, the "magic" non-discriminating table,
// the partial-function guard, and a case statement over extra constants.
namespace exact_asm::fixtures {

inline constexpr std::string_view kSortingProgram =
    "[ if j != n then [ if F(i) > F(j) then [ F(i) := F(j) || F(j) := F(i) ] || j := j+1 ]\n"
    "|| if j = n and i+1 != n then [ i := i+1 || j := i+2 ] ]\n";

// Largest integer element in sorting states; `+` is undefined above it.
inline constexpr int kSortingMaxInt = 4;

VocabularyPtr sorting_vocabulary();
// F(k) = values[k] for k < n, undef for n <= k <= kSortingMaxInt.
PartialStructure sorting_state(int n, int i, int j, const std::vector<int>& values,
                               bool initial = false);
// n in `sizes`, 0 <= i < j <= n, F(0..n-1) over {0..value_count-1}.
std::vector<PartialStructure> sorting_states(const std::vector<int>& sizes = {2, 3},
                                             int value_count = 3);

inline constexpr std::string_view kExample6Program =
    "[ if d then if c then if b then s := x\n"
    "|| if d then if not c then t := x\n"
    "|| if d then if not b then s := y ]\n";

VocabularyPtr example6_vocabulary();
// The eight assignments to d, c, b with x, y holding distinct elements,
// named X, Y0, Y1, Y2 (d true) and Z00..Z11 (d false; digits give c, b).
std::vector<std::pair<std::string, PartialStructure>> example6_states();
// Explore and update sets written out from the five behavior classes.
AlgorithmSpec example6_spec();

// Three states whose explore sets {b,d}, {b,c}, {c,d} admit no
// discrimination order; every outcome is the empty update set.
AlgorithmSpec remark3_spec();

inline constexpr std::string_view kPartialFProgram = "if x != a then y := f(x)\n";
inline constexpr std::string_view kPartialFNormalForm =
    "[ if x = a and f(x) = a then [ ] || if x = a and f(x) != a then [ ] || if x != a then y := f(x) ]\n";
// x = a with f undefined at a; x = b with f(b) = c.
std::vector<std::pair<std::string, PartialStructure>> partial_f_states();

inline constexpr std::string_view kMagicCaseProgram =
    "case light of\n"
    "  when red then go := false\n"
    "  when green then go := true\n"
    "end\n";
// light = red, green, undef, and a non-distinguished element.
std::vector<std::pair<std::string, PartialStructure>> magic_case_states();

const std::vector<std::string>& names();
// File name and content pairs for a fixture; SpecificationError for an
// unknown name.
std::vector<std::pair<std::string, std::string>> files(std::string_view name);

}  // namespace exact_asm::fixtures
