#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace telehardy {

/// The four measurable quantities: Alice holds D1 and U1, Bob holds D2 and U2.
enum class Observable { D1, D2, U1, U2 };

inline constexpr std::array<Observable, 4> kObservables{Observable::D1, Observable::D2, Observable::U1,
                                                        Observable::U2};

/// Measurement contexts, one observable per party, Alice's listed first.
enum class Context { D1D2, D1U2, U1D2, U1U2 };

inline constexpr std::array<Context, 4> kContexts{Context::D1D2, Context::D1U2, Context::U1D2, Context::U1U2};

std::string_view observable_name(Observable o);
std::optional<Observable> parse_observable(std::string_view text);
std::string_view context_name(Context c);
std::optional<Context> parse_context(std::string_view text);

/// Alice's and Bob's observable in a context.
Observable alice_of(Context c);
Observable bob_of(Context c);

/// Outcome cell (a, b) of a 2x2 joint table, stored at index 2a + b:
/// (0,0), (0,1), (1,0), (1,1).
inline constexpr std::size_t cell_index(int a, int b) { return static_cast<std::size_t>(2 * a + b); }

template <class T>
struct BasicProbabilityTable {
    std::array<std::array<T, 4>, 4> cells{};

    std::array<T, 4>& operator[](Context c) { return cells[static_cast<std::size_t>(c)]; }
    const std::array<T, 4>& operator[](Context c) const { return cells[static_cast<std::size_t>(c)]; }
    T& at(Context c, int a, int b) { return (*this)[c][cell_index(a, b)]; }
    const T& at(Context c, int a, int b) const { return (*this)[c][cell_index(a, b)]; }

    friend bool operator==(const BasicProbabilityTable&, const BasicProbabilityTable&) = default;
};

using ProbabilityTable = BasicProbabilityTable<double>;

}  // namespace telehardy
