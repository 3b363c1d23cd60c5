#pragma once

// Initial-condition descriptors for the CLI.
//
// A seed is one term per channel, comma separated, each sampled on j in [r, 0]:
//   cos | sin | exp | <k>*cos | <k>*sin | <k>*exp | <number> | table(v_r;...;v_0)
// or "@file.csv" to read the window [r, 0] from an orbit CSV.
// A seed pair is "seedA:seedB".

#include <string_view>
#include <vector>

#include "delaystab/engine.hpp"

namespace delaystab {

/// Throws ConfigError on malformed descriptors.
HistoryState parse_seed(std::string_view text, std::size_t n_channels, Step window_start);

StatePair parse_seed_pair(std::string_view text, std::size_t n_channels, Step window_start);

/// The three two-channel initial conditions (cos j, sin j), (e^j, -1) and
/// (-3/2 e^j, 3/2 cos j); for other N, channel i cycles through the same terms.
std::vector<HistoryState> default_seeds(std::size_t n_channels, Step window_start);

/// The three pairs formed by the default seeds (0,1), (0,2), (1,2).
std::vector<StatePair> default_seed_pairs(std::size_t n_channels, Step window_start);

}  // namespace delaystab
