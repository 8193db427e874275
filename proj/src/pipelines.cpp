#include "fdw/pipelines.hpp"

#include "fdw/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace fdw {

bool PipelineSpec::valid() const {
    if (base == Base::Poss && (ner != NerMode::None || pos != PosMode::None)) return false;
    if ((base == Base::Chnk || base == Base::Dep) && pos != PosMode::None) return false;
    if (ner != NerMode::None && pos != PosMode::None) return false;
    return true;
}

LayerSet PipelineSpec::required_layers() const {
    LayerSet need;
    switch (base) {
        case Base::Tok: break;
        case Base::Lem: need.insert(Layer::Lemma); break;
        case Base::Chnk: need.insert(Layer::Chunk); break;
        case Base::Dep: need.insert(Layer::Dep); break;
        case Base::Poss: need.insert(Layer::Pos); break;
    }
    if (pos != PosMode::None) need.insert(Layer::Pos);
    if (ner != NerMode::None) need.insert(Layer::Ner);
    if (stop_filter) need.insert(Layer::Stop);
    if (alpha_filter) need.insert(Layer::Alpha);
    return need;
}

namespace {

std::vector<PipelineSpec> build_enumeration() {
    struct Modifier {
        NerMode ner;
        PosMode pos;
    };
    const Modifier plain{NerMode::None, PosMode::None};
    const Modifier attach{NerMode::Attach, PosMode::None};
    const Modifier replace{NerMode::Replace, PosMode::None};
    const Modifier separate{NerMode::None, PosMode::Separate};
    const Modifier combined{NerMode::None, PosMode::Combined};

    std::vector<PipelineSpec> out;
    auto add_family = [&](Base base, std::initializer_list<Modifier> mods) {
        for (const auto& m : mods) {
            for (auto [stop, alpha] : {std::pair{false, false}, {true, false}, {false, true}, {true, true}}) {
                out.push_back({base, m.ner, m.pos, stop, alpha});
            }
        }
    };
    add_family(Base::Tok, {plain, attach, replace, separate, combined});
    add_family(Base::Lem, {plain, attach, replace, separate, combined});
    add_family(Base::Chnk, {plain, attach, replace});
    add_family(Base::Dep, {plain, attach, replace});
    add_family(Base::Poss, {plain});
    return out;
}

struct NameTable {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
};

const NameTable& name_table() {
    static const NameTable table = [] {
        NameTable t;
        for (const auto& spec : enumerate_pipelines()) {
            t.index.emplace(pipeline_name(spec), t.names.size());
            t.names.push_back(pipeline_name(spec));
        }
        return t;
    }();
    return table;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
}

}  // namespace

const std::vector<PipelineSpec>& enumerate_pipelines() {
    static const std::vector<PipelineSpec> all = build_enumeration();
    return all;
}

std::size_t canonical_index(const PipelineSpec& spec) {
    const auto& all = enumerate_pipelines();
    auto it = std::find(all.begin(), all.end(), spec);
    if (it == all.end()) throw ArgumentError("invalid pipeline specification");
    return static_cast<std::size_t>(it - all.begin());
}

std::string pipeline_name(const PipelineSpec& spec) {
    std::string name;
    switch (spec.base) {
        case Base::Tok: name = "TOK"; break;
        case Base::Lem: name = "LEM"; break;
        case Base::Chnk: name = "CHNK"; break;
        case Base::Dep: name = "DEP"; break;
        case Base::Poss: name = "POSS"; break;
    }
    if (spec.ner == NerMode::Attach) name += "NER";
    if (spec.ner == NerMode::Replace) name += "NERR";
    if (spec.pos == PosMode::Separate) name += "POSS";
    if (spec.pos == PosMode::Combined) name += "POS";
    if (spec.stop_filter) name += "STOP";
    if (spec.alpha_filter) name += "ALPHA";
    return name;
}

std::optional<PipelineSpec> parse_pipeline_name(std::string_view name) {
    const auto& table = name_table();
    auto it = table.index.find(upper(name));
    if (it == table.index.end()) return std::nullopt;
    return enumerate_pipelines()[it->second];
}

PipelineSpec pipeline_from_name(std::string_view name) {
    if (auto spec = parse_pipeline_name(name)) return *spec;
    std::string valid;
    for (const auto& n : name_table().names) {
        if (!valid.empty()) valid += ",";
        valid += n;
    }
    throw ArgumentError("unknown pipeline '" + std::string(name) + "'; valid names: " + valid);
}

std::vector<PipelineSpec> select_pipelines(std::string_view list) {
    if (list == "all" || list == "ALL") return enumerate_pipelines();
    std::vector<bool> chosen(enumerate_pipelines().size(), false);
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        auto item = list.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) chosen[canonical_index(pipeline_from_name(item))] = true;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::vector<PipelineSpec> out;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (chosen[i]) out.push_back(enumerate_pipelines()[i]);
    }
    if (out.empty()) throw ArgumentError("empty pipeline selection");
    return out;
}

void require_layers(const PipelineSpec& spec, LayerSet available) {
    auto missing = spec.required_layers() - available;
    if (!missing.empty()) {
        throw CapabilityError("pipeline " + pipeline_name(spec) + " requires layer " +
                              std::string(layer_name(missing.layers().front())) + ", which the corpus lacks");
    }
}

std::vector<PipelineSpec> runnable_pipelines(const std::vector<PipelineSpec>& specs, LayerSet available,
                                             std::vector<PipelineSpec>* skipped) {
    std::vector<PipelineSpec> ok;
    for (const auto& s : specs) {
        if (available.contains_all(s.required_layers())) ok.push_back(s);
        else if (skipped) skipped->push_back(s);
    }
    return ok;
}

namespace {

struct Group {
    int begin;
    int end;
};

}  // namespace

std::vector<FeatureUnit> apply_pipeline(const PipelineSpec& spec, const AnnotatedDoc& doc) {
    require_layers(spec, doc.layers);
    const int n = doc.size();
    const auto& tokens = doc.tokens;
    auto tok = [&](int i) -> const TokenAnn& { return tokens[static_cast<std::size_t>(i)]; };

    std::vector<int> entity_of(static_cast<std::size_t>(n), -1);
    if (spec.ner != NerMode::None) {
        for (std::size_t e = 0; e < doc.entities.size(); ++e) {
            for (int i = doc.entities[e].start; i < doc.entities[e].end; ++i) entity_of[static_cast<std::size_t>(i)] = static_cast<int>(e);
        }
    }
    auto ent = [&](int i) { return entity_of[static_cast<std::size_t>(i)]; };

    // 1. Base grouping: noun chunks become single units, everything else is per token.
    std::vector<Group> groups;
    std::vector<bool> is_chunk;
    if (spec.base == Base::Chnk) {
        std::vector<Span> chunks = doc.chunks;
        std::sort(chunks.begin(), chunks.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
        std::size_t c = 0;
        for (int i = 0; i < n;) {
            if (c < chunks.size() && chunks[c].start == i) {
                groups.push_back({chunks[c].start, chunks[c].end});
                is_chunk.push_back(true);
                i = chunks[c].end;
                ++c;
            } else {
                groups.push_back({i, i + 1});
                is_chunk.push_back(false);
                ++i;
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            groups.push_back({i, i + 1});
            is_chunk.push_back(false);
        }
    }

    // 2a. NER replacement: single-token units of one entity collapse into one unit.
    if (spec.ner == NerMode::Replace) {
        std::vector<Group> merged;
        std::vector<bool> merged_chunk;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const int first = groups[g].begin;
            const bool mergeable = !is_chunk[g] && ent(first) >= 0;
            if (mergeable && !merged.empty() && !merged_chunk.back() && ent(merged.back().begin) == ent(first)) {
                merged.back().end = groups[g].end;
                continue;
            }
            merged.push_back(groups[g]);
            merged_chunk.push_back(is_chunk[g]);
        }
        groups = std::move(merged);
        is_chunk = std::move(merged_chunk);
    }

    auto base_surface = [&](int i) -> std::string {
        const auto& t = tok(i);
        switch (spec.base) {
            case Base::Tok:
            case Base::Chnk: return t.text;
            case Base::Lem: return t.lemma;
            case Base::Dep: return t.text + "/" + t.deprel + "/" + tok(t.head).text;
            case Base::Poss: return t.pos;
        }
        return t.text;
    };

    std::vector<FeatureUnit> units;
    units.reserve(groups.size() * (spec.pos == PosMode::Separate ? 2 : 1));
    for (const auto& g : groups) {
        std::string surface;
        for (int i = g.begin; i < g.end; ++i) {
            std::string piece;
            if (spec.ner == NerMode::Replace && ent(i) >= 0) {
                if (i > g.begin && ent(i - 1) == ent(i)) continue;
                piece = doc.entities[static_cast<std::size_t>(ent(i))].type;
            } else {
                piece = base_surface(i);
            }
            if (!surface.empty()) surface += '_';
            surface += piece;
        }
        const int carrier = g.begin;

        // 2b. NER attachment uses the first entity touching the unit.
        if (spec.ner == NerMode::Attach) {
            for (int i = g.begin; i < g.end; ++i) {
                if (ent(i) >= 0) {
                    surface += '_';
                    surface += doc.entities[static_cast<std::size_t>(ent(i))].type;
                    break;
                }
            }
        }
        if (spec.pos == PosMode::Combined) {
            surface += '_';
            surface += tok(carrier).pos;
        }

        // 3-4. Filters test the carrier token.
        const auto& ct = tok(carrier);
        if (spec.stop_filter && ct.is_stop) continue;
        if (spec.alpha_filter && !ct.is_alpha) continue;

        units.push_back({std::move(surface), carrier});
        if (spec.pos == PosMode::Separate) units.push_back({ct.pos, carrier});
    }
    return units;
}

std::vector<std::string> unit_surfaces(const PipelineSpec& spec, const AnnotatedDoc& doc) {
    auto units = apply_pipeline(spec, doc);
    std::vector<std::string> out;
    out.reserve(units.size());
    for (auto& u : units) out.push_back(std::move(u.surface));
    return out;
}

}  // namespace fdw
