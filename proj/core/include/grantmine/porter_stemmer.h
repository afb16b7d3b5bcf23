#ifndef GRANTMINE_PORTER_STEMMER_H_
#define GRANTMINE_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace grantmine {

// Porter (1980) suffix stripper, steps 1a through 5b, in the form of the
// reference implementation distributed with the algorithm's test vocabulary
// (words of length <= 2 are untouched; step 2 maps "bli" -> "ble" and
// "logi" -> "log").
//
// Only lowercase ASCII alphabetic words are stemmed. Anything else, including
// UTF-8 text, is returned unchanged.
std::string Stem(std::string_view word);

}  // namespace grantmine

#endif  // GRANTMINE_PORTER_STEMMER_H_
