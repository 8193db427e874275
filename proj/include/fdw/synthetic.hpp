#pragma once

#include "fdw/corpus.hpp"

#include <cstddef>
#include <cstdint>

namespace fdw {

/// Fully annotated toy corpus (every layer populated). Positive documents
/// contain the verb "zap"; negative documents never do.
struct ToyOptions {
    std::size_t n_docs = 200;
    double positive_rate = 0.25;
    std::uint64_t seed = 7;
};

Corpus make_toy_corpus(const ToyOptions& options = {});

/// Plain-text corpus whose label signal lives in a fixed token set. Every
/// noise token is rewritten as one of `split` variants, so raising `split`
/// fragments the noise into rarer units and raises FD while the signal
/// tokens stay untouched. split = 1 leaves the noise as is.
struct TrendOptions {
    std::size_t n_docs = 1000;
    double positive_rate = 0.25;
    std::size_t doc_length = 30;
    std::size_t signal_tokens = 3;  // signal draws per document
    std::size_t signal_vocab = 10;  // per class
    double signal_purity = 0.8;     // chance a signal draw comes from the document's own class
    std::size_t noise_vocab = 300;
    std::uint64_t seed = 11;
};

Corpus make_trend_corpus(std::size_t split, const TrendOptions& options = {});

}  // namespace fdw
