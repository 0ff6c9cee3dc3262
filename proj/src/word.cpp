#include "bellcert/sosdp.hpp"

#include <algorithm>

namespace bellcert {

bool Word::is_identity() const {
    return std::all_of(letters.begin(), letters.end(),
                       [](const auto& seq) { return seq.empty(); });
}

bool Word::is_full_correlator() const {
    return std::all_of(letters.begin(), letters.end(),
                       [](const auto& seq) { return seq.size() == 1; });
}

uint32_t Word::correlator_inputs() const {
    uint32_t x = 0;
    for (size_t k = 0; k < letters.size(); ++k)
        if (letters[k].size() == 1 && letters[k][0]) x |= 1u << k;
    return x;
}

Word Word::adjoint() const {
    Word out = *this;
    for (auto& seq : out.letters) std::reverse(seq.begin(), seq.end());
    return out;
}

size_t Word::length() const {
    size_t n = 0;
    for (const auto& seq : letters) n += seq.size();
    return n;
}

std::string Word::str() const {
    if (is_identity()) return "I";
    std::string s;
    for (size_t k = 0; k < letters.size(); ++k) {
        for (uint8_t x : letters[k]) {
            if (!s.empty()) s += ' ';
            s += 'A';
            s += char('0' + x);
            s += '(' + std::to_string(k) + ')';
        }
    }
    return s;
}

Word canonical_reduce(Word w) {
    for (auto& seq : w.letters) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i + 1 < seq.size(); ++i) {
                if (seq[i] == seq[i + 1]) {
                    seq.erase(seq.begin() + long(i), seq.begin() + long(i) + 2);
                    changed = true;
                    break;
                }
            }
        }
    }
    return w;
}

Word word_product(const Word& a, const Word& b) {
    if (a.n_parties() != b.n_parties())
        throw std::invalid_argument("word party counts differ");
    Word out = a;
    for (size_t k = 0; k < out.letters.size(); ++k)
        out.letters[k].insert(out.letters[k].end(), b.letters[k].begin(), b.letters[k].end());
    return canonical_reduce(std::move(out));
}

std::vector<Word> monomial_basis(int n) {
    if (n < 2) throw std::invalid_argument("monomial basis needs at least 2 parties");
    const int split = (n + 1) / 2;
    std::vector<Word> words;
    for (int half = 0; half < 2; ++half) {
        const int lo = half == 0 ? 0 : split;
        const int hi = half == 0 ? split : n;
        const int width = hi - lo;
        for (uint32_t code = 0; code < (1u << width); ++code) {
            Word w = Word::identity(n);
            for (int j = 0; j < width; ++j)
                w.letters[size_t(lo + j)].push_back(uint8_t((code >> j) & 1u));
            words.push_back(std::move(w));
        }
    }
    return words;
}

} // namespace bellcert
