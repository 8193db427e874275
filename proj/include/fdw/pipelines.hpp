#pragma once

#include "fdw/corpus.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdw {

enum class Base : std::uint8_t { Tok, Lem, Chnk, Dep, Poss };
enum class NerMode : std::uint8_t { None, Attach, Replace };
enum class PosMode : std::uint8_t { None, Separate, Combined };

/// One preprocessing variant: base representation, at most one of the NER
/// or POS modifiers, and the stopword / non-alphabetic filters.
struct PipelineSpec {
    Base base = Base::Tok;
    NerMode ner = NerMode::None;
    PosMode pos = PosMode::None;
    bool stop_filter = false;
    bool alpha_filter = false;

    bool valid() const;
    LayerSet required_layers() const;

    bool operator==(const PipelineSpec&) const = default;
};

struct FeatureUnit {
    std::string surface;
    int carrier = 0;  // token index (span-initial token for span units)

    bool operator==(const FeatureUnit&) const = default;
};

/// The 68 variants in canonical order: base (TOK, LEM, CHNK, DEP, POSS), then
/// modifier (plain, NER, NERR, POSS, POS), then filters (none, STOP, ALPHA,
/// STOP+ALPHA).
const std::vector<PipelineSpec>& enumerate_pipelines();

/// Position in enumerate_pipelines(); spec must be valid.
std::size_t canonical_index(const PipelineSpec& spec);

/// e.g. "TOKPOSSTOP", "CHNKNERR", "POSSALPHA".
std::string pipeline_name(const PipelineSpec& spec);

/// Inverse of pipeline_name over the 68 variants (case-insensitive).
std::optional<PipelineSpec> parse_pipeline_name(std::string_view name);

/// Like parse_pipeline_name but throws ArgumentError listing valid names.
PipelineSpec pipeline_from_name(std::string_view name);

/// "all" or a comma-separated list of names, returned in canonical order
/// without duplicates.
std::vector<PipelineSpec> select_pipelines(std::string_view list);

/// Throws CapabilityError naming the pipeline and the first missing layer.
void require_layers(const PipelineSpec& spec, LayerSet available);

/// Splits specs into those the layers support and those they do not.
std::vector<PipelineSpec> runnable_pipelines(const std::vector<PipelineSpec>& specs, LayerSet available,
                                             std::vector<PipelineSpec>* skipped = nullptr);

/// Transforms one document: base units, then the NER or POS modifier, then
/// the stop filter, then the alpha filter. Filters test the carrier token.
std::vector<FeatureUnit> apply_pipeline(const PipelineSpec& spec, const AnnotatedDoc& doc);

/// Surfaces of apply_pipeline in order.
std::vector<std::string> unit_surfaces(const PipelineSpec& spec, const AnnotatedDoc& doc);

}  // namespace fdw
