#include "fdw/corpus.hpp"
#include "fdw/error.hpp"

#include <charconv>
#include <fstream>
#include <optional>

namespace fdw {

namespace {

struct DocBuilder {
    AnnotatedDoc doc;
    bool has_label = false;
    bool lemma_ok = true;
    bool pos_ok = true;
    bool dep_ok = true;
};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return cols;
}

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// "# key = value" -> (key, value)
std::optional<std::pair<std::string_view, std::string_view>> comment_kv(std::string_view line) {
    auto body = trim(line.substr(1));
    auto eq = body.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    return std::make_pair(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string error_at(std::size_t line_no, const std::string& what) {
    return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

Corpus parse_conllu(std::istream& in, const Stopwords& stopwords) {
    std::vector<DocBuilder> builders;
    bool file_has_ent = false;
    bool file_has_chunks = false;

    // Sentence-local state.
    int sentence_base = -1;
    std::vector<std::string> sentence_ents;
    std::vector<std::pair<int, int>> pending_chunks;  // 1-based inclusive token ids
    std::size_t pending_chunks_line = 0;

    auto current = [&]() -> DocBuilder& {
        if (builders.empty()) {
            builders.emplace_back();
            builders.back().doc.id = "doc1";
        }
        return builders.back();
    };

    auto end_sentence = [&]() {
        if (sentence_base < 0) {
            if (!pending_chunks.empty()) throw DataError(error_at(pending_chunks_line, "chunks comment without a sentence"));
            return;
        }
        auto& doc = current().doc;
        const int len = static_cast<int>(sentence_ents.size());
        for (int i = 0; i < len;) {
            if (sentence_ents[static_cast<std::size_t>(i)].empty()) {
                ++i;
                continue;
            }
            int j = i + 1;
            while (j < len && sentence_ents[static_cast<std::size_t>(j)] == sentence_ents[static_cast<std::size_t>(i)]) ++j;
            doc.entities.push_back({sentence_base + i, sentence_base + j, sentence_ents[static_cast<std::size_t>(i)]});
            i = j;
        }
        for (auto [a, b] : pending_chunks) {
            if (a < 1 || b > len || a > b) {
                throw DataError(error_at(pending_chunks_line, "chunk " + std::to_string(a) + "-" + std::to_string(b) +
                                                                  " outside sentence of " + std::to_string(len) + " tokens"));
            }
            doc.chunks.push_back({sentence_base + a - 1, sentence_base + b});
        }
        sentence_base = -1;
        sentence_ents.clear();
        pending_chunks.clear();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view(line);
        if (trim(view).empty()) {
            end_sentence();
            continue;
        }
        if (view.front() == '#') {
            auto kv = comment_kv(view);
            if (!kv) continue;
            auto [key, value] = *kv;
            if (key == "doc_id") {
                end_sentence();
                builders.emplace_back();
                builders.back().doc.id = std::string(value);
            } else if (key == "label") {
                if (value != "0" && value != "1") throw DataError(error_at(line_no, "label must be 0 or 1"));
                current().doc.label = value == "1" ? 1 : 0;
                current().has_label = true;
            } else if (key == "chunks") {
                file_has_chunks = true;
                pending_chunks_line = line_no;
                std::size_t start = 0;
                while (start <= value.size()) {
                    auto comma = value.find(',', start);
                    auto item = trim(value.substr(start, comma - start));
                    if (!item.empty()) {
                        auto dash = item.find('-');
                        auto a = parse_int(trim(item.substr(0, dash)));
                        auto b = dash == std::string_view::npos ? a : parse_int(trim(item.substr(dash + 1)));
                        if (!a || !b) throw DataError(error_at(line_no, "malformed chunk range '" + std::string(item) + "'"));
                        pending_chunks.emplace_back(*a, *b);
                    }
                    if (comma == std::string_view::npos) break;
                    start = comma + 1;
                }
            }
            continue;
        }

        auto cols = split_tabs(view);
        if (cols.size() != 10) {
            throw DataError(error_at(line_no, "expected 10 tab-separated columns, found " + std::to_string(cols.size())));
        }
        // Multiword token ranges and empty nodes carry no annotations of their own.
        if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
        auto id = parse_int(cols[0]);
        if (!id || *id < 1) throw DataError(error_at(line_no, "malformed token id '" + std::string(cols[0]) + "'"));

        auto& b = current();
        auto& doc = b.doc;
        if (sentence_base < 0) sentence_base = doc.size();
        const int index = doc.size();
        if (*id != index - sentence_base + 1) {
            throw DataError(error_at(line_no, "token id " + std::string(cols[0]) + " out of sequence"));
        }

        TokenAnn t;
        t.text = std::string(cols[1]);
        const bool form_is_underscore = cols[1] == "_";
        if (cols[2] == "_" && !form_is_underscore) b.lemma_ok = false;
        else t.lemma = std::string(cols[2]);
        if (cols[3] == "_" && !form_is_underscore) b.pos_ok = false;
        else t.pos = std::string(cols[3]);

        if (cols[6] == "_" || cols[7] == "_") {
            b.dep_ok = false;
            t.head = index;
        } else {
            auto head = parse_int(cols[6]);
            if (!head) throw DataError(error_at(line_no, "non-integer HEAD '" + std::string(cols[6]) + "'"));
            if (*head == 0) {
                t.head = index;
                t.deprel = "ROOT";
            } else {
                t.head = sentence_base + *head - 1;
                t.deprel = std::string(cols[7]);
            }
        }

        std::string ent;
        if (cols[9] != "_") {
            std::size_t start = 0;
            while (start <= cols[9].size()) {
                auto bar = cols[9].find('|', start);
                auto item = cols[9].substr(start, bar - start);
                if (item.substr(0, 4) == "Ent=") {
                    ent = std::string(item.substr(4));
                    file_has_ent = true;
                }
                if (bar == std::string_view::npos) break;
                start = bar + 1;
            }
        }
        t.ent_type = ent;
        sentence_ents.push_back(std::move(ent));

        t.is_stop = stopwords.contains(t.text);
        t.is_alpha = is_alphabetic(t.text);
        doc.tokens.push_back(std::move(t));
    }
    end_sentence();

    std::vector<AnnotatedDoc> docs;
    docs.reserve(builders.size());
    for (auto& b : builders) {
        if (!b.has_label) throw DataError("doc " + b.doc.id + ": missing '# label = 0|1' comment");
        LayerSet layers{Layer::Stop, Layer::Alpha};
        if (b.lemma_ok) layers.insert(Layer::Lemma);
        if (b.pos_ok) layers.insert(Layer::Pos);
        if (b.dep_ok) {
            layers.insert(Layer::Dep);
        } else {
            for (std::size_t i = 0; i < b.doc.tokens.size(); ++i) {
                b.doc.tokens[i].head = static_cast<int>(i);
                b.doc.tokens[i].deprel.clear();
            }
        }
        if (file_has_ent) {
            layers.insert(Layer::Ner);
        } else {
            b.doc.entities.clear();
        }
        if (file_has_chunks) layers.insert(Layer::Chunk);
        b.doc.layers = layers;
        docs.push_back(std::move(b.doc));
    }
    return make_corpus(std::move(docs));
}

Corpus load_conllu(const std::filesystem::path& path, const Stopwords& stopwords) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_conllu(in, stopwords);
}

}  // namespace fdw
