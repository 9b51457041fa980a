#pragma once

#include <string>
#include <string_view>

namespace hostnet {

/// Normalizes raw social-media text: HTML entities are unescaped
/// (&amp; &lt; &gt; &quot; and numeric &#NN; / &#xNN;), <...> tags are
/// dropped, http(s):// URLs are dropped up to the next whitespace, and
/// whitespace runs collapse to single spaces with the ends trimmed.
/// Total: never throws.
std::string clean_text(std::string_view raw);

}  // namespace hostnet
