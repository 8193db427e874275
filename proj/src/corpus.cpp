#include "fdw/corpus.hpp"

#include "fdw/embedded.hpp"
#include "fdw/error.hpp"
#include "fdw/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace fdw {

using nlohmann::json;

std::string_view layer_name(Layer layer) {
    switch (layer) {
        case Layer::Lemma: return "LEMMA";
        case Layer::Pos: return "POS";
        case Layer::Ner: return "NER";
        case Layer::Dep: return "DEP";
        case Layer::Chunk: return "CHUNK";
        case Layer::Stop: return "STOP";
        case Layer::Alpha: return "ALPHA";
    }
    return "?";
}

std::vector<Layer> LayerSet::layers() const {
    std::vector<Layer> out;
    for (std::size_t i = 0; i < kLayerCount; ++i) {
        auto l = static_cast<Layer>(i);
        if (contains(l)) out.push_back(l);
    }
    return out;
}

std::string LayerSet::to_string() const {
    std::string out;
    for (Layer l : layers()) {
        if (!out.empty()) out += ',';
        out += layer_name(l);
    }
    return out;
}

std::vector<std::size_t> Corpus::usable() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!docs[i].empty()) idx.push_back(i);
    }
    return idx;
}

std::size_t Corpus::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count_if(docs.begin(), docs.end(), [label](const AnnotatedDoc& d) { return d.label == label; }));
}

// ---------------------------------------------------------------- stopwords

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace

Stopwords Stopwords::parse(std::string_view text) {
    std::unordered_set<std::string> words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t");
        words.insert(ascii_lower(std::string_view(line).substr(first, last - first + 1)));
    }
    return Stopwords(std::move(words));
}

const Stopwords& Stopwords::builtin() {
    static const Stopwords list = [] {
        auto text = embedded::lookup("stopwords_en");
        if (!text) throw DataError("built-in stopword list missing from build");
        return parse(*text);
    }();
    return list;
}

Stopwords Stopwords::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stopword list " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Stopwords Stopwords::from_environment() {
    if (const char* env = std::getenv("FDW_STOPWORDS"); env != nullptr && *env != '\0') {
        return from_file(env);
    }
    return builtin();
}

bool Stopwords::contains(std::string_view word) const {
    return words_.count(ascii_lower(word)) != 0;
}

// ---------------------------------------------------------------- alphabetic

namespace {

// Decodes one UTF-8 code point starting at s[i]; advances i. Returns nullopt
// on malformed input (i still advances by one byte).
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return std::nullopt;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return std::nullopt;
    }
    for (int k = 1; k < len; ++k) {
        auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return std::nullopt;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

bool is_letter(char32_t cp) {
    if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows, math, box drawing
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE00 && cp <= 0xFE0F) return false;
    if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF20) return false;
    if (cp >= 0xFF3B && cp <= 0xFF40) return false;
    if (cp >= 0xFF5B && cp <= 0xFF65) return false;
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
    return true;
}

bool is_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' || cp == 0xA0;
}

bool is_word_char(char32_t cp) {
    return is_letter(cp) || (cp >= '0' && cp <= '9') || cp == '_';
}

}  // namespace

bool is_alphabetic(std::string_view utf8) {
    if (utf8.empty()) return false;
    std::size_t i = 0;
    while (i < utf8.size()) {
        auto cp = decode_utf8(utf8, i);
        if (!cp || !is_letter(*cp)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- validation

namespace {

[[noreturn]] void doc_error(const AnnotatedDoc& doc, const std::string& what) {
    throw DataError("doc " + doc.id + ": " + what);
}

template <typename SpanT>
void check_spans(const AnnotatedDoc& doc, const std::vector<SpanT>& spans, const char* kind) {
    std::vector<std::pair<int, int>> sorted;
    sorted.reserve(spans.size());
    for (const auto& s : spans) {
        if (s.start < 0 || s.end > doc.size() || s.start >= s.end) {
            doc_error(doc, std::string(kind) + " span [" + std::to_string(s.start) + ", " +
                               std::to_string(s.end) + ") out of range or empty");
        }
        sorted.emplace_back(s.start, s.end);
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first < sorted[i - 1].second) {
            doc_error(doc, std::string(kind) + " spans overlap at token " + std::to_string(sorted[i].first));
        }
    }
}

}  // namespace

void validate_doc(const AnnotatedDoc& doc) {
    if (doc.label != 0 && doc.label != 1) doc_error(doc, "label must be 0 or 1");
    const int n = doc.size();
    for (int i = 0; i < n; ++i) {
        const auto& t = doc.tokens[static_cast<std::size_t>(i)];
        if (t.text.empty()) doc_error(doc, "token " + std::to_string(i) + " has empty text");
        if (doc.layers.contains(Layer::Dep)) {
            if (t.head < 0 || t.head >= n) {
                doc_error(doc, "head out of range (token " + std::to_string(i) + ", head " + std::to_string(t.head) + ")");
            }
            if (t.head == i && t.deprel != "ROOT") {
                doc_error(doc, "root token " + std::to_string(i) + " must have deprel ROOT");
            }
        }
    }
    if (!doc.layers.contains(Layer::Ner) && !doc.entities.empty()) doc_error(doc, "entity spans without NER layer");
    if (!doc.layers.contains(Layer::Chunk) && !doc.chunks.empty()) doc_error(doc, "chunk spans without CHUNK layer");
    check_spans(doc, doc.entities, "entity");
    check_spans(doc, doc.chunks, "chunk");
    if (doc.layers.contains(Layer::Ner)) {
        std::vector<const std::string*> expected(static_cast<std::size_t>(n), nullptr);
        for (const auto& e : doc.entities) {
            if (e.type.empty()) doc_error(doc, "entity span with empty type");
            for (int i = e.start; i < e.end; ++i) expected[static_cast<std::size_t>(i)] = &e.type;
        }
        static const std::string kNone;
        for (int i = 0; i < n; ++i) {
            const std::string& want = expected[static_cast<std::size_t>(i)] ? *expected[static_cast<std::size_t>(i)] : kNone;
            if (doc.tokens[static_cast<std::size_t>(i)].ent_type != want) {
                doc_error(doc, "token " + std::to_string(i) + " ent_type '" + doc.tokens[static_cast<std::size_t>(i)].ent_type +
                                   "' disagrees with entity spans");
            }
        }
    }
}

Corpus make_corpus(std::vector<AnnotatedDoc> docs) {
    Corpus corpus;
    corpus.capabilities = LayerSet::all();
    for (auto& doc : docs) {
        validate_doc(doc);
        if (doc.empty()) {
            warn("doc " + doc.id + ": empty document; counted for density, excluded from training");
            continue;
        }
        corpus.capabilities = corpus.capabilities & doc.layers;
    }
    if (docs.empty()) corpus.capabilities = LayerSet{};
    corpus.docs = std::move(docs);
    return corpus;
}

// ---------------------------------------------------------------- JSONL

namespace {

void fill_builtin_flags(TokenAnn& t, const Stopwords& stopwords, bool have_stop, bool have_alpha) {
    if (!have_stop) t.is_stop = stopwords.contains(t.text);
    if (!have_alpha) t.is_alpha = is_alphabetic(t.text);
}

// Maximal runs of equal non-empty ent_type.
std::vector<EntitySpan> spans_from_token_types(const std::vector<TokenAnn>& tokens) {
    std::vector<EntitySpan> spans;
    for (std::size_t i = 0; i < tokens.size();) {
        if (tokens[i].ent_type.empty()) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < tokens.size() && tokens[j].ent_type == tokens[i].ent_type) ++j;
        spans.push_back({static_cast<int>(i), static_cast<int>(j), tokens[i].ent_type});
        i = j;
    }
    return spans;
}

AnnotatedDoc doc_from_json(const json& obj, const Stopwords& stopwords) {
    AnnotatedDoc doc;
    if (!obj.is_object()) throw DataError("expected a JSON object");
    if (!obj.contains("id")) throw DataError("missing key 'id'");
    doc.id = obj.at("id").is_string() ? obj.at("id").get<std::string>() : obj.at("id").dump();
    if (!obj.contains("label")) throw DataError("doc " + doc.id + ": missing key 'label'");
    doc.label = obj.at("label").get<int>();
    doc.layers = LayerSet::all();

    const json empty_array = json::array();
    const json& tokens = obj.contains("tokens") ? obj.at("tokens") : empty_array;
    if (!tokens.is_array()) throw DataError("doc " + doc.id + ": 'tokens' must be an array");

    bool all_e = true;
    bool any_e = false;
    for (const auto& tj : tokens) {
        TokenAnn t;
        t.text = tj.at("t").get<std::string>();
        if (tj.contains("l")) t.lemma = tj.at("l").get<std::string>();
        else doc.layers.erase(Layer::Lemma);
        if (tj.contains("p")) t.pos = tj.at("p").get<std::string>();
        else doc.layers.erase(Layer::Pos);
        if (tj.contains("e")) {
            t.ent_type = tj.at("e").get<std::string>();
            any_e = any_e || !t.ent_type.empty();
        } else {
            all_e = false;
        }
        if (tj.contains("h") && tj.contains("d")) {
            t.head = tj.at("h").get<int>();
            t.deprel = tj.at("d").get<std::string>();
        } else {
            t.head = static_cast<int>(doc.tokens.size());
            doc.layers.erase(Layer::Dep);
        }
        bool have_stop = tj.contains("s");
        bool have_alpha = tj.contains("a");
        if (have_stop) t.is_stop = tj.at("s").get<bool>();
        if (have_alpha) t.is_alpha = tj.at("a").get<bool>();
        fill_builtin_flags(t, stopwords, have_stop, have_alpha);
        doc.tokens.push_back(std::move(t));
    }
    if (!doc.layers.contains(Layer::Dep)) {
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            doc.tokens[i].head = static_cast<int>(i);
            doc.tokens[i].deprel.clear();
        }
    }

    if (obj.contains("entities")) {
        for (const auto& ej : obj.at("entities")) {
            if (!ej.is_array() || ej.size() != 3) throw DataError("doc " + doc.id + ": entity must be [start, end, type]");
            doc.entities.push_back({ej[0].get<int>(), ej[1].get<int>(), ej[2].get<std::string>()});
        }
        // Tokens without "e" take their type from the spans; explicit ones are checked by validation.
        if (!all_e) {
            for (const auto& e : doc.entities) {
                for (int i = std::max(0, e.start); i < std::min(e.end, doc.size()); ++i) {
                    if (!tokens[static_cast<std::size_t>(i)].contains("e")) doc.tokens[static_cast<std::size_t>(i)].ent_type = e.type;
                }
            }
        }
    } else if (all_e || any_e) {
        doc.entities = spans_from_token_types(doc.tokens);
    } else {
        doc.layers.erase(Layer::Ner);
    }

    if (obj.contains("chunks")) {
        for (const auto& cj : obj.at("chunks")) {
            if (!cj.is_array() || cj.size() != 2) throw DataError("doc " + doc.id + ": chunk must be [start, end]");
            doc.chunks.push_back({cj[0].get<int>(), cj[1].get<int>()});
        }
    } else {
        doc.layers.erase(Layer::Chunk);
    }
    return doc;
}

}  // namespace

Corpus parse_jsonl(std::istream& in, const Stopwords& stopwords) {
    std::vector<AnnotatedDoc> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        try {
            docs.push_back(doc_from_json(obj, stopwords));
        } catch (const json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return make_corpus(std::move(docs));
}

Corpus load_jsonl(const std::filesystem::path& path, const Stopwords& stopwords) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_jsonl(in, stopwords);
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
    for (const auto& doc : corpus.docs) {
        json obj;
        obj["id"] = doc.id;
        obj["label"] = doc.label;
        json tokens = json::array();
        for (const auto& t : doc.tokens) {
            json tj;
            tj["t"] = t.text;
            if (doc.layers.contains(Layer::Lemma)) tj["l"] = t.lemma;
            if (doc.layers.contains(Layer::Pos)) tj["p"] = t.pos;
            if (doc.layers.contains(Layer::Ner)) tj["e"] = t.ent_type;
            if (doc.layers.contains(Layer::Dep)) {
                tj["h"] = t.head;
                tj["d"] = t.deprel;
            }
            tj["s"] = t.is_stop;
            tj["a"] = t.is_alpha;
            tokens.push_back(std::move(tj));
        }
        obj["tokens"] = std::move(tokens);
        if (doc.layers.contains(Layer::Ner)) {
            json ents = json::array();
            for (const auto& e : doc.entities) ents.push_back(json::array({e.start, e.end, e.type}));
            obj["entities"] = std::move(ents);
        }
        if (doc.layers.contains(Layer::Chunk)) {
            json chunks = json::array();
            for (const auto& c : doc.chunks) chunks.push_back(json::array({c.start, c.end}));
            obj["chunks"] = std::move(chunks);
        }
        out << obj.dump() << '\n';
    }
}

std::string to_jsonl(const Corpus& corpus) {
    std::ostringstream out;
    write_jsonl(out, corpus);
    return out.str();
}

// ---------------------------------------------------------------- plain text

std::vector<std::string> tokenize_plain(std::string_view text) {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) tokens.push_back(std::move(word));
        word.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        auto cp = decode_utf8(text, i);
        std::string_view raw = text.substr(start, i - start);
        if (cp && is_space(*cp)) {
            flush();
        } else if (cp && is_word_char(*cp)) {
            word.append(raw);
        } else {
            flush();
            tokens.emplace_back(raw);
        }
    }
    flush();
    return tokens;
}

Corpus annotate_plain(std::span<const LabeledText> texts, const Stopwords& stopwords) {
    std::vector<AnnotatedDoc> docs;
    docs.reserve(texts.size());
    for (const auto& item : texts) {
        AnnotatedDoc doc;
        doc.id = item.id;
        doc.label = item.label;
        doc.layers = LayerSet{Layer::Stop, Layer::Alpha};
        for (auto& w : tokenize_plain(item.text)) {
            TokenAnn t;
            t.lemma = ascii_lower(w);
            t.is_stop = stopwords.contains(w);
            t.is_alpha = is_alphabetic(w);
            t.head = static_cast<int>(doc.tokens.size());
            t.text = std::move(w);
            doc.tokens.push_back(std::move(t));
        }
        docs.push_back(std::move(doc));
    }
    return make_corpus(std::move(docs));
}

Corpus load_plain(const std::filesystem::path& path, const Stopwords& stopwords) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<LabeledText> texts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        std::string label = line.substr(0, tab);
        if (label != "0" && label != "1") {
            throw DataError("line " + std::to_string(line_no) + ": expected 'label<TAB>text' with label 0 or 1");
        }
        texts.push_back({std::to_string(line_no), tab == std::string::npos ? std::string() : line.substr(tab + 1),
                         label == "1" ? 1 : 0});
    }
    return annotate_plain(texts, stopwords);
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::Jsonl;
    if (name == "conllu") return CorpusFormat::Conllu;
    if (name == "plain") return CorpusFormat::Plain;
    throw ArgumentError("unknown corpus format '" + std::string(name) + "' (expected jsonl, conllu, plain)");
}

std::string_view corpus_format_name(CorpusFormat format) {
    switch (format) {
        case CorpusFormat::Jsonl: return "jsonl";
        case CorpusFormat::Conllu: return "conllu";
        case CorpusFormat::Plain: return "plain";
    }
    return "?";
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const Stopwords& stopwords) {
    switch (format) {
        case CorpusFormat::Jsonl: return load_jsonl(path, stopwords);
        case CorpusFormat::Conllu: return load_conllu(path, stopwords);
        case CorpusFormat::Plain: return load_plain(path, stopwords);
    }
    throw ArgumentError("unknown corpus format");
}

}  // namespace fdw
