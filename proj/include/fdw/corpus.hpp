#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fdw {

/// Annotation layers a document may carry. Token text is always present.
enum class Layer : std::uint8_t { Lemma, Pos, Ner, Dep, Chunk, Stop, Alpha };

inline constexpr std::size_t kLayerCount = 7;

std::string_view layer_name(Layer layer);

class LayerSet {
public:
    constexpr LayerSet() = default;
    constexpr LayerSet(std::initializer_list<Layer> layers) {
        for (Layer l : layers) insert(l);
    }

    static constexpr LayerSet all() {
        LayerSet s;
        s.bits_ = (1u << kLayerCount) - 1;
        return s;
    }

    constexpr bool contains(Layer l) const { return (bits_ & bit(l)) != 0; }
    constexpr bool contains_all(LayerSet other) const { return (bits_ & other.bits_) == other.bits_; }
    constexpr void insert(Layer l) { bits_ |= bit(l); }
    constexpr void erase(Layer l) { bits_ &= static_cast<std::uint8_t>(~bit(l)); }
    constexpr bool empty() const { return bits_ == 0; }

    constexpr LayerSet operator&(LayerSet o) const {
        LayerSet s;
        s.bits_ = bits_ & o.bits_;
        return s;
    }
    constexpr LayerSet operator-(LayerSet o) const {
        LayerSet s;
        s.bits_ = bits_ & static_cast<std::uint8_t>(~o.bits_);
        return s;
    }
    constexpr bool operator==(const LayerSet&) const = default;

    std::vector<Layer> layers() const;
    /// e.g. "LEMMA,POS,STOP"
    std::string to_string() const;

private:
    static constexpr std::uint8_t bit(Layer l) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l)); }
    std::uint8_t bits_ = 0;
};

struct TokenAnn {
    std::string text;
    std::string lemma;
    std::string pos;
    std::string ent_type;  // empty outside entities
    int head = 0;          // document-level index; own index for the root
    std::string deprel;    // "ROOT" for roots
    bool is_stop = false;
    bool is_alpha = false;

    bool operator==(const TokenAnn&) const = default;
};

/// Half-open token span [start, end).
struct Span {
    int start = 0;
    int end = 0;

    int length() const { return end - start; }
    bool operator==(const Span&) const = default;
};

struct EntitySpan {
    int start = 0;
    int end = 0;
    std::string type;

    bool operator==(const EntitySpan&) const = default;
};

struct AnnotatedDoc {
    std::string id;
    int label = 0;  // 1 = positive class
    std::vector<TokenAnn> tokens;
    std::vector<EntitySpan> entities;
    std::vector<Span> chunks;
    LayerSet layers;  // layers populated in this document

    bool empty() const { return tokens.empty(); }
    int size() const { return static_cast<int>(tokens.size()); }
    bool operator==(const AnnotatedDoc&) const = default;
};

struct Corpus {
    std::vector<AnnotatedDoc> docs;
    LayerSet capabilities;

    /// Indices of documents that can take part in training (non-empty).
    std::vector<std::size_t> usable() const;
    std::size_t count_label(int label) const;

    bool operator==(const Corpus&) const = default;
};

class Stopwords {
public:
    Stopwords() = default;
    explicit Stopwords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// The shipped English list.
    static const Stopwords& builtin();
    /// One entry per line; blank lines and '#' comments ignored.
    static Stopwords from_file(const std::filesystem::path& path);
    static Stopwords parse(std::string_view text);
    /// FDW_STOPWORDS if set, otherwise the shipped list.
    static Stopwords from_environment();

    /// Case-insensitive (ASCII) membership.
    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// True when the string is non-empty and every code point is a letter.
/// ASCII is classified exactly; non-ASCII code points count as letters unless
/// they fall in the common punctuation, symbol, or emoji blocks.
bool is_alphabetic(std::string_view utf8);

/// Checks every document invariant; throws DataError naming the document.
void validate_doc(const AnnotatedDoc& doc);

/// Validates all documents and computes capabilities as the intersection of
/// per-document layers (empty documents populate every layer vacuously).
Corpus make_corpus(std::vector<AnnotatedDoc> docs);

Corpus parse_jsonl(std::istream& in, const Stopwords& stopwords = Stopwords::builtin());
Corpus load_jsonl(const std::filesystem::path& path, const Stopwords& stopwords = Stopwords::builtin());
void write_jsonl(std::ostream& out, const Corpus& corpus);
std::string to_jsonl(const Corpus& corpus);

Corpus parse_conllu(std::istream& in, const Stopwords& stopwords = Stopwords::builtin());
Corpus load_conllu(const std::filesystem::path& path, const Stopwords& stopwords = Stopwords::builtin());

struct LabeledText {
    std::string id;
    std::string text;
    int label = 0;
};

/// Splits on whitespace, then separates each punctuation character.
std::vector<std::string> tokenize_plain(std::string_view text);

/// Degraded built-in annotation: STOP and ALPHA layers only.
Corpus annotate_plain(std::span<const LabeledText> texts, const Stopwords& stopwords = Stopwords::builtin());

/// Tab-separated "label<TAB>text" lines; ids are 1-based line numbers.
Corpus load_plain(const std::filesystem::path& path, const Stopwords& stopwords = Stopwords::builtin());

enum class CorpusFormat { Jsonl, Conllu, Plain };
CorpusFormat parse_corpus_format(std::string_view name);
std::string_view corpus_format_name(CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const Stopwords& stopwords = Stopwords::builtin());

}  // namespace fdw
