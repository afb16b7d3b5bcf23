#include "grantmine/porter_stemmer.h"

#include <algorithm>

namespace grantmine {
namespace {

// Works on a buffer b[0..k]; j marks the end of the stem once a suffix matched.
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string Run() {
    if (k_ <= 1) return b_;
    Step1ab();
    if (k_ > 0) {
      Step1c();
      Step2();
      Step3();
      Step4();
      Step5();
    }
    return b_.substr(0, k_ + 1);
  }

 private:
  bool IsConsonant(int i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !IsConsonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int Measure() const {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > j_) return n;
      if (!IsConsonant(i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > j_) return n;
        if (IsConsonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > j_) return n;
        if (!IsConsonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!IsConsonant(i)) return true;
    }
    return false;
  }

  bool DoubleConsonant(int i) const {
    if (i < 1) return false;
    if (b_[i] != b_[i - 1]) return false;
    return IsConsonant(i);
  }

  // consonant-vowel-consonant ending at i, where the last consonant is not w, x or y.
  bool Cvc(int i) const {
    if (i < 2 || !IsConsonant(i) || IsConsonant(i - 1) || !IsConsonant(i - 2)) return false;
    const char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool Ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(k_ - len + 1, len) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void SetTo(std::string_view s) {
    b_.replace(j_ + 1, k_ - j_, s);
    k_ = j_ + static_cast<int>(s.size());
    b_.resize(k_ + 1);
  }

  void ReplaceIfMeasured(std::string_view s) {
    if (Measure() > 0) SetTo(s);
  }

  void Step1ab() {
    if (b_[k_] == 's') {
      if (Ends("sses")) {
        k_ -= 2;
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_[k_ - 1] != 's') {
        --k_;
      }
      b_.resize(k_ + 1);
    }
    if (Ends("eed")) {
      if (Measure() > 0) {
        --k_;
        b_.resize(k_ + 1);
      }
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      k_ = j_;
      b_.resize(k_ + 1);
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleConsonant(k_)) {
        const char ch = b_[k_];
        if (ch != 'l' && ch != 's' && ch != 'z') {
          --k_;
          b_.resize(k_ + 1);
        }
      } else {
        j_ = k_;
        if (Measure() == 1 && Cvc(k_)) SetTo("e");
      }
    }
  }

  void Step1c() {
    if (Ends("y") && VowelInStem()) b_[k_] = 'i';
  }

  // Tries each (suffix, replacement) pair; the first suffix match ends the step
  // whether or not the measure condition allowed the replacement.
  template <std::size_t N>
  bool ReplaceFirst(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
    for (const auto& [suffix, replacement] : rules) {
      if (Ends(suffix)) {
        ReplaceIfMeasured(replacement);
        return true;
      }
    }
    return false;
  }

  void Step2() {
    if (k_ < 1) return;
    switch (b_[k_ - 1]) {
      case 'a': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"ational", "ate"}, {"tional", "tion"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'c': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"enci", "ence"}, {"anci", "ance"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"izer", "ize"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'o': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        ReplaceFirst(kRules);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        ReplaceFirst(kRules);
        break;
      }
      case 't': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'g': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"logi", "log"}};
        ReplaceFirst(kRules);
        break;
      }
      default:
        break;
    }
  }

  void Step3() {
    switch (b_[k_]) {
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'i': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"iciti", "ic"}};
        ReplaceFirst(kRules);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"ical", "ic"}, {"ful", ""}};
        ReplaceFirst(kRules);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
            {"ness", ""}};
        ReplaceFirst(kRules);
        break;
      }
      default:
        break;
    }
  }

  // Strips -ant, -ence, -ize etc. when the remaining stem has measure > 1.
  void Step4() {
    if (k_ < 1) return;
    auto any = [this](std::initializer_list<std::string_view> suffixes) {
      return std::any_of(suffixes.begin(), suffixes.end(),
                         [this](std::string_view s) { return Ends(s); });
    };
    bool matched = false;
    switch (b_[k_ - 1]) {
      case 'a': matched = any({"al"}); break;
      case 'c': matched = any({"ance", "ence"}); break;
      case 'e': matched = any({"er"}); break;
      case 'i': matched = any({"ic"}); break;
      case 'l': matched = any({"able", "ible"}); break;
      case 'n': matched = any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        matched = (Ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) || Ends("ou");
        break;
      case 's': matched = any({"ism"}); break;
      case 't': matched = any({"ate", "iti"}); break;
      case 'u': matched = any({"ous"}); break;
      case 'v': matched = any({"ive"}); break;
      case 'z': matched = any({"ize"}); break;
      default: break;
    }
    if (matched && Measure() > 1) {
      k_ = j_;
      b_.resize(k_ + 1);
    }
  }

  void Step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      const int m = Measure();
      if (m > 1 || (m == 1 && !Cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == 'l' && DoubleConsonant(k_) && Measure() > 1) --k_;
    b_.resize(k_ + 1);
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string Stem(std::string_view word) {
  const bool stemmable = !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return c >= 'a' && c <= 'z';
  });
  if (!stemmable) return std::string(word);
  return PorterStemmer(std::string(word)).Run();
}

}  // namespace grantmine
