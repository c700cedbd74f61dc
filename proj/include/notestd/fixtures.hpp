#pragma once

#include "notestd/corpus.hpp"
#include "notestd/note_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace notestd {

enum class PlantKind { Spelling, Abbreviation, NonStandardTerm, GrammarRule };

const char* plant_kind_name(PlantKind kind);

struct Plant {
    PlantKind kind = PlantKind::Spelling;
    std::string before; // corrupted form as written into the note
    std::string after;  // form the standardizer is expected to produce
    std::size_t position = 0; // token index into the generated note text
    bool operator==(const Plant&) const = default;
};

struct PlantLedger {
    std::string accession_num;
    std::vector<Plant> planted;

    long count(PlantKind kind) const;
    // "before -> after" strings for one kind, in plant order.
    std::vector<std::string> events(PlantKind kind) const;
};

ordered_json ledger_to_json(const PlantLedger& ledger);
PlantLedger ledger_from_json(const json& value);

// Per-metric targets for the generated corpus. Draws are rounded normals
// clamped at zero; the pre-truncation mean is adjusted so the clamped draws
// still average to the stated target.
struct GeneratorProfile {
    double grammar_mean = 4.9;
    double grammar_sd = 1.8;
    double spelling_mean = 3.3;
    double spelling_sd = 5.2;
    double terms_mean = 3.1;
    double terms_sd = 3.0;
    double abbrev_mean = 15.8;
    double abbrev_sd = 9.1;

    static GeneratorProfile all_zero();
};

GeneratorProfile profile_from_json(const json& doc);

struct GeneratorOptions {
    GeneratorProfile profile{};
    // Adds irreversible gibberish tokens that no lexicon covers; these are
    // deliberately absent from the ledger.
    bool out_of_lexicon_noise = false;
};

struct GeneratedCorpus {
    std::vector<SourceNote> notes;
    std::vector<PlantLedger> ledgers;
};

// Deterministic in (n, seed, options); notes are built from clean template
// sentences with ledgered corruptions injected. PRNG: std::mt19937_64 with
// per-note splitmix substreams, portable across platforms.
GeneratedCorpus generate_corpus(std::size_t n, std::uint64_t seed,
                                const GeneratorOptions& options = {});

// E[max(0, round(Normal(mu, sd)))] and the mu that makes it equal a target;
// exposed for the generator's own distribution tests.
double clamped_round_normal_mean(double mu, double sd);
double solve_generator_mean(double target, double sd);

} // namespace notestd
