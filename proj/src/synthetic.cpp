#include "fdw/synthetic.hpp"

#include "fdw/error.hpp"
#include "fdw/random.hpp"

#include <array>
#include <cmath>
#include <string>

namespace fdw {

namespace {

struct Verb {
    const char* base;
    const char* third;
    const char* past;
};

constexpr const char* kNouns[] = {
    "dog",    "cat",     "house",  "car",    "book",   "tree",   "phone",  "school", "teacher", "friend",
    "game",   "song",    "movie",  "city",   "river",  "garden", "window", "door",   "table",   "letter",
    "picture", "party",  "class",  "team",   "coach",  "player", "ticket", "store",  "market",  "bridge",
    "cookie", "pizza",   "coffee", "bottle", "jacket", "camera", "laptop", "email",  "answer",  "question",
    "story",  "dream",   "plan",   "idea",   "week",   "morning", "night", "summer", "winter",  "holiday",
};
constexpr const char* kAdjectives[] = {
    "big",   "small", "red",   "blue",  "old",    "new",   "happy", "sad",    "funny", "quiet",
    "loud",  "fast",  "slow",  "warm",  "cold",   "green", "dark",  "bright", "tiny",  "huge",
    "nice",  "weird", "great", "awful", "strange", "lucky", "busy",  "calm",   "fresh", "sweet",
};
constexpr Verb kVerbs[] = {
    {"see", "sees", "saw"},       {"like", "likes", "liked"},   {"find", "finds", "found"},
    {"take", "takes", "took"},    {"make", "makes", "made"},    {"want", "wants", "wanted"},
    {"love", "loves", "loved"},   {"watch", "watches", "watched"}, {"read", "reads", "read"},
    {"buy", "buys", "bought"},    {"bring", "brings", "brought"}, {"visit", "visits", "visited"},
    {"paint", "paints", "painted"}, {"open", "opens", "opened"}, {"carry", "carries", "carried"},
    {"share", "shares", "shared"}, {"call", "calls", "called"},  {"help", "helps", "helped"},
    {"follow", "follows", "followed"}, {"enjoy", "enjoys", "enjoyed"},
};
constexpr const char* kDeterminers[] = {"the", "a", "this", "that", "my", "your"};
constexpr const char* kPrepositions[] = {"in", "on", "with", "near", "after", "before"};
constexpr const char* kPronouns[] = {"I", "you", "we", "they", "she", "he"};
constexpr const char* kPersons[] = {"Anna", "Ben", "Carla", "Dmitri", "Elena", "Farid", "Grace", "Hugo",
                                    "Ines", "Jonas", "Kira", "Liam", "Maya", "Noah", "Olga", "Pavel"};
constexpr const char* kSurnames[] = {"Smith", "Novak", "Garcia", "Kowalski", "Berg", "Rossi"};
constexpr const char* kPlaces[] = {"Paris", "Berlin", "Madrid", "Oslo", "Ljubljana", "Vienna", "Prague", "Dublin"};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&items)[N]) {
    return items[rng.uniform_index(N)];
}

std::string lower(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

class DocBuilder {
public:
    DocBuilder(Rng& rng, const Stopwords& stop) : rng_(rng), stop_(stop) {}

    AnnotatedDoc& doc() { return doc_; }

    // Appends one sentence; `zap` forces the verb.
    void sentence(bool zap) {
        const int subj = noun_phrase(false);
        const int verb = add_verb(zap);
        const int obj = noun_phrase(true);
        attach(subj, verb, "nsubj");
        attach(obj, verb, "dobj");
        if (rng_.uniform01() < 0.5) {
            const int prep = add(pick(rng_, kPrepositions), "", "ADP");
            attach(prep, verb, "prep");
            const int pobj = noun_phrase(true);
            attach(pobj, prep, "pobj");
        }
        const int punct = add(rng_.uniform01() < 0.8 ? "." : "!", "", "PUNCT");
        attach(punct, verb, "punct");
        doc_.tokens[static_cast<std::size_t>(verb)].head = verb;
        doc_.tokens[static_cast<std::size_t>(verb)].deprel = "ROOT";
    }

private:
    int add(const std::string& text, std::string lemma, const std::string& pos) {
        TokenAnn t;
        t.text = text;
        t.lemma = lemma.empty() ? lower(text) : std::move(lemma);
        t.pos = pos;
        t.head = doc_.size();
        t.is_stop = stop_.contains(text);
        t.is_alpha = is_alphabetic(text);
        doc_.tokens.push_back(std::move(t));
        return doc_.size() - 1;
    }

    void attach(int child, int head, const char* rel) {
        auto& t = doc_.tokens[static_cast<std::size_t>(child)];
        t.head = head;
        t.deprel = rel;
    }

    int add_verb(bool zap) {
        const double r = rng_.uniform01();
        if (zap) return add("zap", "zap", "VERB");
        const Verb& v = pick(rng_, kVerbs);
        return add(r < 0.4 ? v.base : (r < 0.7 ? v.third : v.past), v.base, "VERB");
    }

    void entity(int start, const char* type) {
        const int end = doc_.size();
        for (int i = start; i < end; ++i) doc_.tokens[static_cast<std::size_t>(i)].ent_type = type;
        doc_.entities.push_back({start, end, type});
    }

    // Returns the head token of the phrase; every phrase is a noun chunk.
    int noun_phrase(bool object) {
        const int start = doc_.size();
        const double r = rng_.uniform01();
        int head;
        if (!object && r < 0.25) {
            head = add(pick(rng_, kPronouns), "", "PRON");
        } else if (r < 0.40) {
            head = add(pick(rng_, kPersons), "", "PROPN");
            if (rng_.uniform01() < 0.4) {
                const int sur = add(pick(rng_, kSurnames), "", "PROPN");
                attach(head, sur, "compound");
                head = sur;
            }
            entity(start, "PERSON");
        } else if (r < 0.48) {
            head = add(pick(rng_, kPlaces), "", "PROPN");
            entity(start, "GPE");
        } else {
            int det = -1, adj = -1;
            if (rng_.uniform01() < 0.8) det = add(pick(rng_, kDeterminers), "", "DET");
            if (rng_.uniform01() < 0.5) adj = add(pick(rng_, kAdjectives), "", "ADJ");
            const char* noun = pick(rng_, kNouns);
            const bool plural = rng_.uniform01() < 0.3;
            head = add(plural ? std::string(noun) + "s" : noun, noun, "NOUN");
            if (det >= 0) attach(det, head, "det");
            if (adj >= 0) attach(adj, head, "amod");
        }
        doc_.chunks.push_back({start, doc_.size()});
        return head;
    }

    Rng& rng_;
    const Stopwords& stop_;
    AnnotatedDoc doc_;
};

}  // namespace

Corpus make_toy_corpus(const ToyOptions& options) {
    if (!(options.positive_rate > 0 && options.positive_rate < 1)) throw ArgumentError("positive rate must be in (0, 1)");
    Rng rng(options.seed);
    const Stopwords& stop = Stopwords::builtin();
    const auto n_pos = static_cast<std::size_t>(std::llround(options.positive_rate * static_cast<double>(options.n_docs)));
    std::vector<int> labels(options.n_docs, 0);
    for (std::size_t i = 0; i < n_pos; ++i) labels[i] = 1;
    rng.shuffle(std::span<int>(labels));

    std::vector<AnnotatedDoc> docs;
    for (std::size_t d = 0; d < options.n_docs; ++d) {
        DocBuilder b(rng, stop);
        const std::size_t sentences = 2 + rng.uniform_index(3);
        for (std::size_t s = 0; s < sentences; ++s) b.sentence(labels[d] == 1);
        auto& doc = b.doc();
        doc.id = "toy" + std::to_string(d + 1);
        doc.label = labels[d];
        doc.layers = LayerSet::all();
        docs.push_back(std::move(doc));
    }
    return make_corpus(std::move(docs));
}

Corpus make_trend_corpus(std::size_t split, const TrendOptions& options) {
    if (split < 1) throw ArgumentError("split must be at least 1");
    if (options.signal_tokens > options.doc_length) throw ArgumentError("more signal tokens than document length");
    // Labels, signal draws and base noise tokens depend only on the seed, so
    // family members differ only in how finely the noise is split.
    Rng rng(options.seed);
    Rng variants(mix_seed(options.seed, "split"));
    const auto n_pos = static_cast<std::size_t>(std::llround(options.positive_rate * static_cast<double>(options.n_docs)));
    std::vector<int> labels(options.n_docs, 0);
    for (std::size_t i = 0; i < n_pos; ++i) labels[i] = 1;
    rng.shuffle(std::span<int>(labels));

    std::vector<LabeledText> texts;
    for (std::size_t d = 0; d < options.n_docs; ++d) {
        std::vector<std::string> words;
        for (std::size_t i = 0; i < options.signal_tokens; ++i) {
            const bool own = rng.uniform01() < options.signal_purity;
            const int cls = own ? labels[d] : 1 - labels[d];
            words.push_back((cls == 1 ? "sigp" : "sign") + std::to_string(rng.uniform_index(options.signal_vocab)));
        }
        for (std::size_t i = options.signal_tokens; i < options.doc_length; ++i) {
            std::string noise = "noise" + std::to_string(rng.uniform_index(options.noise_vocab));
            // Drawn for every token so the variant stream does not depend on split.
            const double v = variants.uniform01();
            if (split > 1) noise += "v" + std::to_string(static_cast<std::size_t>(v * static_cast<double>(split)));
            words.push_back(std::move(noise));
        }
        for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[rng.uniform_index(i)]);
        std::string text;
        for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
        texts.push_back({"trend" + std::to_string(d + 1), std::move(text), labels[d]});
    }
    return annotate_plain(texts);
}

}  // namespace fdw
