#include "notestd/fixtures.hpp"

#include "notestd/errors.hpp"
#include "notestd/prng.hpp"
#include "notestd/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace notestd {

namespace {

enum class Sec { CC, Hist, Vitals, Exam, Labs, Rad, Imp, Plan, Edu, Ret };

struct Slot {
    PlantKind kind;
    const char* corrupted;
    const char* clean;
};

struct BankSentence {
    Sec sec;
    const char* tmpl; // "{}" marks slot positions, in order
    std::vector<Slot> slots;
    bool ambiguous = false; // corrupted render must be isolated by spacers
};

// Clean renders are fixpoints of the rule pipeline: every non-slot word is in
// the shipped vocabulary, no heading-pattern collisions, no nonstandard
// phrases, no bare abbreviations, every sentence capitalized and terminated.
// A consistency suite in tests/ verifies this against the shipped resources.

const std::vector<BankSentence>& cc_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::CC, "Reports new onset of double vision.", {}},
        {Sec::CC, "Presents with worsening {} in both hands.",
         {{PlantKind::Spelling, "numbnes", "numbness"}}},
        {Sec::CC, "Reports increasing {} over the past two months.",
         {{PlantKind::Spelling, "fatige", "fatigue"}}},
        {Sec::CC, "Presents for routine review of demyelinating disease.", {}},
    };
    return bank;
}

const std::vector<BankSentence>& hist_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Hist, "The symptoms began three weeks ago and have progressed slowly.", {}},
        {Sec::Hist, "Patient describes {} in both feet.",
         {{PlantKind::NonStandardTerm, "pins and needles", "paresthesias"}}},
        {Sec::Hist, "Reports intermittent blurred vision with heat exposure.", {}},
        {Sec::Hist, "Describes new gait difficulties on longer walks.", {}},
        {Sec::Hist, "There is a remote {} treated medically.",
         {{PlantKind::NonStandardTerm, "heart attack", "myocardial infarction"}}},
        {Sec::Hist, "Documented {} of optic neuritis last year.",
         {{PlantKind::Abbreviation, "hx", "history"}}},
        {Sec::Hist, "Sleep has been poor with {} most nights.",
         {{PlantKind::NonStandardTerm, "trouble sleeping", "insomnia"}}},
    };
    return bank;
}

const std::vector<BankSentence>& vitals_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Vitals, "Seated {} was 128/76 with pulse 72 and temperature 98.6.",
         {{PlantKind::Abbreviation, "BP", "blood pressure"}}},
        {Sec::Vitals, "Measured weight was 180 pounds with regular {} of 72.",
         {{PlantKind::Abbreviation, "HR", "heart rate"}}},
        {Sec::Vitals, "Seated blood pressure was 122/78 with pulse 68 today.", {}},
    };
    return bank;
}

const std::vector<BankSentence>& exam_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Exam, "Alert and fully oriented throughout the visit today.", {}},
        {Sec::Exam, "Strength was full in all extremities.", {}},
        {Sec::Exam, "Reflexes were brisk with a {} on the left.",
         {{PlantKind::NonStandardTerm, "upgoing toe", "Babinski sign"}}},
        {Sec::Exam, "Sensation was reduced to pinprick in both feet.", {}},
        {Sec::Exam, "Finger to nose testing showed mild {} on the right.",
         {{PlantKind::Spelling, "tremmor", "tremor"}}},
        {Sec::Exam, "Gait was steady without assistance today.", {}},
        {Sec::Exam, "Brisk {} were noted at both knees.",
         {{PlantKind::Abbreviation, "DTR", "deep tendon reflexes"}}},
        {Sec::Exam, "Strength testing showed full {} at all joints.",
         {{PlantKind::Abbreviation, "ROM", "range of motion"}}},
        {Sec::Exam, "Visual acuity was tested {} at the bedside.",
         {{PlantKind::Abbreviation, "OU", "both eyes"}}},
    };
    return bank;
}

const std::vector<BankSentence>& labs_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Labs, "Recent laboratory studies were unremarkable.", {}},
        {Sec::Labs, "Vitamin D level was low at 18.", {}},
        {Sec::Labs, "Recent {} studies showed stable oligoclonal bands.",
         {{PlantKind::Abbreviation, "CSF", "cerebrospinal fluid (CSF)"}}},
        {Sec::Labs, "Screening {} of the right arm was normal.",
         {{PlantKind::Abbreviation, "EMG", "electromyography (EMG)"}}},
        {Sec::Labs, "Baseline {} remained within the normal range.",
         {{PlantKind::Abbreviation, "WBC", "white blood cell count"}}},
        {Sec::Labs, "Routine {} showed no epileptiform activity.",
         {{PlantKind::Abbreviation, "EEG", "electroencephalography (EEG)"}}},
    };
    return bank;
}

const std::vector<BankSentence>& rad_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Rad, "Prior imaging demonstrated scattered white matter lesions.", {}},
        {Sec::Rad, "Repeat {} of the brain showed two new lesions.",
         {{PlantKind::Abbreviation, "MRI", "magnetic resonance imaging (MRI)"}}},
        {Sec::Rad, "Prior {} of the head was unremarkable.",
         {{PlantKind::Abbreviation, "CT", "computed tomography (CT)"}}},
        {Sec::Rad, "Repeat {} of the cervical spine remained stable.",
         {{PlantKind::Abbreviation, "MRI", "magnetic resonance imaging (MRI)"}}},
    };
    return bank;
}

const std::vector<BankSentence>& imp_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Imp, "Symptoms most likely reflect a mild flare.", {}},
        {Sec::Imp, "Findings remain consistent with relapsing remitting {} overall.",
         {{PlantKind::Abbreviation, "MS", "multiple sclerosis (MS)"}},
         true},
        {Sec::Imp, "Probable optic neuritis involving the left eye.", {}},
        {Sec::Imp, "Overall picture suggests stable demyelinating disease.", {}},
    };
    return bank;
}

const std::vector<BankSentence>& plan_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Plan, "Start ocrelizumab infusions every six months.", {}},
        {Sec::Plan, "Continue baclofen for spasticity at night.", {}},
        {Sec::Plan, "Begin a short course of intravenous {}.",
         {{PlantKind::Spelling, "methlylprednisolone", "methylprednisolone"}}},
        {Sec::Plan, "Increase gabapentin to three times daily for neuropathic pain.", {}},
        {Sec::Plan, "Schedule outpatient physical therapy for gait training.", {}},
        {Sec::Plan, "Discuss {} options with the primary care team.",
         {{PlantKind::NonStandardTerm, "water pill", "diuretic"}}},
        {Sec::Plan, "Check thyroid studies and a repeat vitamin D level.", {}},
        {Sec::Plan, "Order repeat {} of the thoracic spine.",
         {{PlantKind::Abbreviation, "MRI", "magnetic resonance imaging (MRI)"}}},
    };
    return bank;
}

const std::vector<BankSentence>& edu_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Edu, "Reviewed infusion safety information with the patient in detail.", {}},
        {Sec::Edu, "Provided written material covering medication side effects.", {}},
    };
    return bank;
}

const std::vector<BankSentence>& ret_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Ret, "Return to clinic in three months.", {}},
        {Sec::Ret, "Return to clinic sooner if new symptoms develop.", {}},
    };
    return bank;
}

// Grammar hosts: plain sentences, each carries exactly one planted grammar error.
const std::vector<BankSentence>& filler_bank() {
    static const std::vector<BankSentence> bank = {
        {Sec::Hist, "The patient was seen in the neurology clinic today.", {}},
        {Sec::Hist, "Overall the course has been slowly progressive.", {}},
        {Sec::Exam, "The remainder of the testing was within normal limits.", {}},
        {Sec::Plan, "The plan was reviewed in detail with the patient.", {}},
        {Sec::Hist, "Symptoms were stable between the last two visits.", {}},
        {Sec::Hist, "The remaining review of systems was negative.", {}},
        {Sec::Plan, "No new medication allergies were reported.", {}},
        {Sec::Exam, "The patient tolerated the testing well.", {}},
    };
    return bank;
}

const std::vector<BankSentence>& spell_hosts() {
    static const std::vector<BankSentence> bank = {
        {Sec::Hist, "Notes mention prior {} with standing.",
         {{PlantKind::Spelling, "dizzines", "dizziness"}}},
        {Sec::Hist, "Reports gradual {} of the left hand.",
         {{PlantKind::Spelling, "weaknes", "weakness"}}},
        {Sec::Hist, "Describes occasional {} around the eyes.",
         {{PlantKind::Spelling, "headche", "headache"}}},
        {Sec::Exam, "Formal {} testing was performed at the bedside.",
         {{PlantKind::Spelling, "coordinaton", "coordination"}}},
        {Sec::Exam, "There was subtle {} in the right hand.",
         {{PlantKind::Spelling, "tingeling", "tingling"}}},
        {Sec::Plan, "Monitor for recurrent {} after each infusion.",
         {{PlantKind::Spelling, "symtoms", "symptoms"}}},
        {Sec::Hist, "Reports clear {} since the last infusion.",
         {{PlantKind::Spelling, "improvment", "improvement"}}},
        {Sec::Imp, "Clinical {} remains unchanged from prior documentation.",
         {{PlantKind::Spelling, "asessment", "assessment"}}},
        {Sec::Plan, "Continue {} at the current evening dose.",
         {{PlantKind::Spelling, "gabapentine", "gabapentin"}}},
        {Sec::Plan, "Treat breakthrough {} with heat and stretching.",
         {{PlantKind::Spelling, "spasticty", "spasticity"}}},
    };
    return bank;
}

const std::vector<BankSentence>& term_hosts() {
    static const std::vector<BankSentence> bank = {
        {Sec::Hist, "Describes a recurring {} during longer walks.",
         {{PlantKind::NonStandardTerm, "charley horse", "muscle cramp"}}},
        {Sec::Hist, "Family notes the patient {} last winter.",
         {{PlantKind::NonStandardTerm, "passed out", "had syncope"}}},
        {Sec::Hist, "Endorses {} during stressful weeks.",
         {{PlantKind::NonStandardTerm, "feeling blue", "symptoms of depression"}}},
        {Sec::Plan, "Review options for prior {} with the urology service.",
         {{PlantKind::NonStandardTerm, "kidney stone", "nephrolithiasis"}}},
        {Sec::Hist, "Reports {} after most meals.",
         {{PlantKind::NonStandardTerm, "belly pain", "abdominal pain"}}},
        {Sec::Plan, "Coordinate {} monitoring with the cardiology team.",
         {{PlantKind::NonStandardTerm, "blood thinner", "anticoagulant"}}},
        {Sec::Hist, "Notes {} when climbing stairs.",
         {{PlantKind::NonStandardTerm, "short of breath", "dyspnea"}}},
    };
    return bank;
}

const std::vector<BankSentence>& abbrev_hosts() {
    static const std::vector<BankSentence> bank = {
        {Sec::Hist, "Documented {} of migraines since childhood.",
         {{PlantKind::Abbreviation, "hx", "history"}}},
        {Sec::Hist, "Symptoms worsened after recent {} sessions.",
         {{PlantKind::Abbreviation, "PT", "physical therapy"}},
         true},
        {Sec::Hist, "History of documented relapses since {} diagnosis was confirmed.",
         {{PlantKind::Abbreviation, "MS", "multiple sclerosis (MS)"}},
         true},
        {Sec::Exam, "Bedside {} testing showed the patient alert and fully oriented.",
         {{PlantKind::Abbreviation, "MS", "mental status (MS)"}},
         true},
        {Sec::Hist, "Received {} at four milligrams for severe breakthrough pain.",
         {{PlantKind::Abbreviation, "MS", "morphine sulfate (MS)"}},
         true},
        {Sec::Vitals, "Repeat seated {} was 126/80 this visit.",
         {{PlantKind::Abbreviation, "BP", "blood pressure"}}},
        {Sec::Labs, "Follow up {} analysis was deferred today.",
         {{PlantKind::Abbreviation, "CSF", "cerebrospinal fluid (CSF)"}}},
        {Sec::Rad, "Prior {} of the orbits was negative.",
         {{PlantKind::Abbreviation, "MRI", "magnetic resonance imaging (MRI)"}}},
        {Sec::Exam, "Focused {} screening was rechecked at the bedside.",
         {{PlantKind::Abbreviation, "VF", "visual fields"}}},
        {Sec::Plan, "Arrange repeat {} of the lumbar spine.",
         {{PlantKind::Abbreviation, "MRI", "magnetic resonance imaging (MRI)"}}},
        {Sec::Plan, "Continue scheduled {} infusions without change.",
         {{PlantKind::Abbreviation, "IV", "intravenous"}}},
        {Sec::Exam, "Repeat {} testing was discussed for the right arm.",
         {{PlantKind::Abbreviation, "EMG", "electromyography (EMG)"}}},
        {Sec::Hist, "Outside records documented prior {} findings in 2020.",
         {{PlantKind::Abbreviation, "CT", "computed tomography (CT)"}}},
        {Sec::Labs, "Morning {} remained stable on therapy.",
         {{PlantKind::Abbreviation, "WBC", "white blood cell count"}}},
        {Sec::Plan, "Obtain routine {} prior to the next infusion.",
         {{PlantKind::Abbreviation, "EEG", "electroencephalography (EEG)"}}},
        {Sec::Hist, "Baseline {} was reviewed against prior values.",
         {{PlantKind::Abbreviation, "HR", "heart rate"}}},
    };
    return bank;
}

// Cue-free sentences, >= 10 tokens, used to isolate ambiguous abbreviations so
// the +-10-token disambiguation window never reaches a neighboring sentence.
const std::vector<const char*>& spacer_bank() {
    static const std::vector<const char*> bank = {
        "Records from the prior visit were reviewed in full detail today.",
        "The interval clinical course was discussed at length during the visit.",
        "All prior outside documents were compared against the current record carefully.",
    };
    return bank;
}

enum class GrammarKind { RemovePeriod, LowercaseStart, DuplicateWord, SpaceBeforePeriod };

const std::vector<std::string>& dup_candidates() {
    static const std::vector<std::string> words = {"the", "was", "were", "has", "of", "and", "in"};
    return words;
}

struct Instance {
    const BankSentence* bank = nullptr;
    std::vector<bool> corrupt;
    bool is_filler = false;
    GrammarKind grammar = GrammarKind::RemovePeriod;
    bool has_grammar = false;
};

struct SlotRef {
    Sec sec;
    std::size_t instance;
    std::size_t slot;
};

std::string render_sentence(const Instance& inst, std::vector<std::size_t>* slot_offsets) {
    const char* t = inst.bank->tmpl;
    std::string out;
    std::size_t slot_idx = 0;
    for (std::size_t i = 0; t[i] != '\0'; ++i) {
        if (t[i] == '{' && t[i + 1] == '}') {
            const Slot& slot = inst.bank->slots[slot_idx];
            if (slot_offsets) slot_offsets->push_back(out.size());
            out += inst.corrupt[slot_idx] ? slot.corrupted : slot.clean;
            ++slot_idx;
            ++i;
        } else {
            out.push_back(t[i]);
        }
    }
    return out;
}

struct GrammarApplication {
    std::string text;
    std::string before;
    std::string after;
    std::size_t char_offset = 0;
    bool applied = false;
};

GrammarApplication apply_grammar_plant(const std::string& clean, GrammarKind kind, Prng& rng) {
    GrammarApplication app;
    app.text = clean;
    switch (kind) {
        case GrammarKind::RemovePeriod: {
            if (!clean.empty() && clean.back() == '.') {
                app.text = clean.substr(0, clean.size() - 1);
                std::size_t start = app.text.find_last_of(' ');
                app.char_offset = start == std::string::npos ? 0 : start + 1;
                app.before = app.text.substr(app.char_offset);
                app.after = app.before + ".";
                app.applied = true;
            }
            break;
        }
        case GrammarKind::LowercaseStart: {
            if (!clean.empty() && std::isupper(static_cast<unsigned char>(clean[0]))) {
                app.text = clean;
                app.text[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(clean[0])));
                std::size_t end = app.text.find(' ');
                app.before = app.text.substr(0, end);
                app.after = clean.substr(0, end);
                app.char_offset = 0;
                app.applied = true;
            }
            break;
        }
        case GrammarKind::DuplicateWord: {
            std::vector<std::pair<std::size_t, std::size_t>> sites; // (pos, len)
            for (const auto& word : dup_candidates()) {
                for (std::size_t pos = clean.find(word); pos != std::string::npos;
                     pos = clean.find(word, pos + 1)) {
                    if (text::on_word_boundary(clean, pos, word.size()) &&
                        pos > 0 /* keep the first word intact */) {
                        sites.push_back({pos, word.size()});
                    }
                }
            }
            if (!sites.empty()) {
                auto [pos, len] = sites[rng.bounded(sites.size())];
                std::string word = clean.substr(pos, len);
                app.text = clean.substr(0, pos + len) + " " + word + clean.substr(pos + len);
                app.before = word + " " + word;
                app.after = word;
                app.char_offset = pos;
                app.applied = true;
            }
            break;
        }
        case GrammarKind::SpaceBeforePeriod: {
            if (!clean.empty() && clean.back() == '.') {
                app.text = clean.substr(0, clean.size() - 1) + " .";
                app.before = " .";
                app.after = ".";
                app.char_offset = app.text.size() - 2;
                app.applied = true;
            }
            break;
        }
    }
    if (!app.applied && !clean.empty() && clean.back() == '.') {
        // fall back to the always-applicable rule
        return apply_grammar_plant(clean, GrammarKind::RemovePeriod, rng);
    }
    return app;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

double clamped_round_normal_mean(double mu, double sd) {
    if (sd <= 0.0) return std::max(0.0, std::round(mu));
    double sum = 0.0;
    const long hi = static_cast<long>(std::ceil(mu + 10.0 * sd)) + 2;
    for (long k = 1; k <= hi; ++k) {
        double p = norm_cdf((static_cast<double>(k) + 0.5 - mu) / sd) -
                   norm_cdf((static_cast<double>(k) - 0.5 - mu) / sd);
        sum += static_cast<double>(k) * p;
    }
    return sum;
}

double solve_generator_mean(double target, double sd) {
    if (target <= 0.0) return target;
    if (sd <= 0.0) return target;
    double lo = target - 6.0 * sd - 1.0;
    double hi = target + 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (clamped_round_normal_mean(mid, sd) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

const char* plant_kind_name(PlantKind kind) {
    switch (kind) {
        case PlantKind::Spelling: return "Spelling";
        case PlantKind::Abbreviation: return "Abbreviation";
        case PlantKind::NonStandardTerm: return "NonStandardTerm";
        case PlantKind::GrammarRule: return "GrammarRule";
    }
    return "?";
}

long PlantLedger::count(PlantKind kind) const {
    long n = 0;
    for (const auto& plant : planted) {
        if (plant.kind == kind) ++n;
    }
    return n;
}

std::vector<std::string> PlantLedger::events(PlantKind kind) const {
    std::vector<std::string> out;
    for (const auto& plant : planted) {
        if (plant.kind == kind) out.push_back(plant.before + " -> " + plant.after);
    }
    return out;
}

ordered_json ledger_to_json(const PlantLedger& ledger) {
    ordered_json doc;
    doc["accession_num"] = ledger.accession_num;
    ordered_json planted = ordered_json::array();
    for (const auto& plant : ledger.planted) {
        ordered_json p;
        p["kind"] = plant_kind_name(plant.kind);
        p["before"] = plant.before;
        p["after"] = plant.after;
        p["position"] = plant.position;
        planted.push_back(std::move(p));
    }
    doc["planted"] = std::move(planted);
    ordered_json counts;
    counts["grammatical_errors"] = ledger.count(PlantKind::GrammarRule);
    counts["spelling_errors"] = ledger.count(PlantKind::Spelling);
    counts["abbreviations_expanded"] = ledger.count(PlantKind::Abbreviation);
    counts["non_standard_terms"] = ledger.count(PlantKind::NonStandardTerm);
    doc["expected_counts"] = std::move(counts);
    return doc;
}

PlantLedger ledger_from_json(const json& value) {
    PlantLedger ledger;
    ledger.accession_num = value.at("accession_num").get<std::string>();
    for (const auto& p : value.at("planted")) {
        Plant plant;
        std::string kind = p.at("kind").get<std::string>();
        if (kind == "Spelling") plant.kind = PlantKind::Spelling;
        else if (kind == "Abbreviation") plant.kind = PlantKind::Abbreviation;
        else if (kind == "NonStandardTerm") plant.kind = PlantKind::NonStandardTerm;
        else if (kind == "GrammarRule") plant.kind = PlantKind::GrammarRule;
        else throw Error(ErrorKind::MalformedLine, "unknown plant kind '" + kind + "'");
        plant.before = p.at("before").get<std::string>();
        plant.after = p.at("after").get<std::string>();
        plant.position = p.at("position").get<std::size_t>();
        ledger.planted.push_back(std::move(plant));
    }
    return ledger;
}

GeneratorProfile GeneratorProfile::all_zero() {
    GeneratorProfile p;
    p.grammar_mean = p.spelling_mean = p.terms_mean = p.abbrev_mean = 0.0;
    p.grammar_sd = p.spelling_sd = p.terms_sd = p.abbrev_sd = 0.0;
    return p;
}

GeneratorProfile profile_from_json(const json& doc) {
    GeneratorProfile p;
    auto get = [&](const char* key, double fallback) { return doc.value(key, fallback); };
    p.grammar_mean = get("grammar_mean", p.grammar_mean);
    p.grammar_sd = get("grammar_sd", p.grammar_sd);
    p.spelling_mean = get("spelling_mean", p.spelling_mean);
    p.spelling_sd = get("spelling_sd", p.spelling_sd);
    p.terms_mean = get("terms_mean", p.terms_mean);
    p.terms_sd = get("terms_sd", p.terms_sd);
    p.abbrev_mean = get("abbrev_mean", p.abbrev_mean);
    p.abbrev_sd = get("abbrev_sd", p.abbrev_sd);
    return p;
}

namespace {

long draw_count(Prng& rng, double adjusted_mean, double sd, double target) {
    if (target <= 0.0) return 0;
    double v = rng.normal(adjusted_mean, sd);
    long k = std::lround(v);
    return std::max(0L, k);
}

struct NoteBuilder {
    std::string text;
    std::size_t tokens = 0;
    PlantLedger ledger;

    void add_line(const std::string& line) {
        text += line;
        text += "\n";
        tokens += text::tokenize_alnum(line).size();
    }

    // Adds a sentence line and records plants with exact token positions.
    void add_sentence(const Instance& inst, Prng& rng) {
        std::vector<std::size_t> offsets;
        std::string sentence = render_sentence(inst, &offsets);

        std::vector<Plant> plants;
        for (std::size_t s = 0; s < inst.bank->slots.size(); ++s) {
            if (!inst.corrupt[s]) continue;
            const Slot& slot = inst.bank->slots[s];
            Plant plant;
            plant.kind = slot.kind;
            plant.before = slot.corrupted;
            plant.after = slot.clean;
            plant.position = tokens + text::tokenize_alnum(sentence.substr(0, offsets[s])).size();
            plants.push_back(std::move(plant));
        }
        if (inst.is_filler && inst.has_grammar) {
            GrammarApplication app = apply_grammar_plant(sentence, inst.grammar, rng);
            if (app.applied) {
                Plant plant;
                plant.kind = PlantKind::GrammarRule;
                plant.before = app.before;
                plant.after = app.after;
                plant.position =
                    tokens + text::tokenize_alnum(app.text.substr(0, app.char_offset)).size();
                plants.push_back(std::move(plant));
                sentence = app.text;
            }
        }
        for (auto& plant : plants) ledger.planted.push_back(std::move(plant));
        add_line(sentence);
    }
};

} // namespace

GeneratedCorpus generate_corpus(std::size_t n, std::uint64_t seed, const GeneratorOptions& options) {
    const GeneratorProfile& profile = options.profile;
    const double mu_grammar = solve_generator_mean(profile.grammar_mean, profile.grammar_sd);
    const double mu_spelling = solve_generator_mean(profile.spelling_mean, profile.spelling_sd);
    const double mu_terms = solve_generator_mean(profile.terms_mean, profile.terms_sd);
    const double mu_abbrev = solve_generator_mean(profile.abbrev_mean, profile.abbrev_sd);

    static const std::vector<Sec> section_order = {Sec::CC,  Sec::Hist, Sec::Vitals, Sec::Exam,
                                                   Sec::Labs, Sec::Rad,  Sec::Imp,    Sec::Plan,
                                                   Sec::Edu,  Sec::Ret};

    GeneratedCorpus corpus;
    Prng base(seed);

    for (std::size_t i = 0; i < n; ++i) {
        Prng rng = base.split(i);

        const long want_grammar = draw_count(rng, mu_grammar, profile.grammar_sd, profile.grammar_mean);
        const long want_spelling =
            draw_count(rng, mu_spelling, profile.spelling_sd, profile.spelling_mean);
        const long want_terms = draw_count(rng, mu_terms, profile.terms_sd, profile.terms_mean);
        const long want_abbrev = draw_count(rng, mu_abbrev, profile.abbrev_sd, profile.abbrev_mean);

        std::map<Sec, std::vector<Instance>> sections;
        auto add_instance = [&](const BankSentence& bank) {
            Instance inst;
            inst.bank = &bank;
            inst.corrupt.assign(bank.slots.size(), false);
            sections[bank.sec].push_back(std::move(inst));
        };
        auto pick = [&](const std::vector<BankSentence>& bank) -> const BankSentence& {
            return bank[rng.bounded(bank.size())];
        };

        // Base skeleton.
        add_instance(pick(cc_bank()));
        {
            // A few distinct history sentences.
            std::vector<std::size_t> idx(hist_bank().size());
            std::iota(idx.begin(), idx.end(), 0);
            partial_shuffle(idx, 3, rng);
            for (std::size_t k = 0; k < 3; ++k) add_instance(hist_bank()[idx[k]]);
        }
        add_instance(pick(vitals_bank()));
        {
            std::vector<std::size_t> idx(exam_bank().size());
            std::iota(idx.begin(), idx.end(), 0);
            partial_shuffle(idx, 3, rng);
            for (std::size_t k = 0; k < 3; ++k) add_instance(exam_bank()[idx[k]]);
        }
        add_instance(pick(labs_bank()));
        add_instance(pick(rad_bank()));
        add_instance(pick(imp_bank()));
        add_instance(pick(plan_bank()));
        add_instance(pick(plan_bank()));
        if (rng.bounded(2) == 0) add_instance(pick(edu_bank()));
        if (rng.bounded(5) != 0) add_instance(pick(ret_bank()));

        // Grow capacity until every target fits.
        auto capacity = [&](PlantKind kind) {
            long cap = 0;
            for (const auto& [sec, instances] : sections) {
                for (const auto& inst : instances) {
                    for (const auto& slot : inst.bank->slots) {
                        if (slot.kind == kind) ++cap;
                    }
                }
            }
            return cap;
        };
        while (capacity(PlantKind::Abbreviation) < want_abbrev) add_instance(pick(abbrev_hosts()));
        while (capacity(PlantKind::Spelling) < want_spelling) add_instance(pick(spell_hosts()));
        while (capacity(PlantKind::NonStandardTerm) < want_terms) add_instance(pick(term_hosts()));

        // Grammar hosts, one plant each.
        for (long g = 0; g < want_grammar; ++g) {
            const BankSentence& filler = pick(filler_bank());
            Instance inst;
            inst.bank = &filler;
            inst.is_filler = true;
            inst.has_grammar = true;
            inst.grammar = static_cast<GrammarKind>(rng.bounded(4));
            sections[filler.sec].push_back(std::move(inst));
        }

        // Choose which slots are corrupted, per kind, uniformly.
        auto corrupt_slots = [&](PlantKind kind, long want) {
            std::vector<SlotRef> refs;
            for (Sec sec : section_order) {
                auto it = sections.find(sec);
                if (it == sections.end()) continue;
                for (std::size_t inst_idx = 0; inst_idx < it->second.size(); ++inst_idx) {
                    const auto& inst = it->second[inst_idx];
                    for (std::size_t s = 0; s < inst.bank->slots.size(); ++s) {
                        if (inst.bank->slots[s].kind == kind) refs.push_back({sec, inst_idx, s});
                    }
                }
            }
            partial_shuffle(refs, static_cast<std::size_t>(want), rng);
            for (long k = 0; k < want && k < static_cast<long>(refs.size()); ++k) {
                const SlotRef& ref = refs[static_cast<std::size_t>(k)];
                sections[ref.sec][ref.instance].corrupt[ref.slot] = true;
            }
        };
        corrupt_slots(PlantKind::Abbreviation, want_abbrev);
        corrupt_slots(PlantKind::Spelling, want_spelling);
        corrupt_slots(PlantKind::NonStandardTerm, want_terms);

        // Render.
        NoteBuilder builder;
        builder.ledger.accession_num = std::to_string(i + 1);
        const bool caps_headings = rng.bounded(2) == 0;
        auto heading = [&](const char* caps, const char* title) {
            builder.add_line(caps_headings ? caps : title);
        };
        std::size_t spacer_next = rng.bounded(spacer_bank().size());
        auto emit_section = [&](Sec sec) {
            auto it = sections.find(sec);
            if (it == sections.end() || it->second.empty()) return false;
            for (const auto& inst : it->second) {
                bool needs_isolation =
                    inst.bank->ambiguous &&
                    std::any_of(inst.corrupt.begin(), inst.corrupt.end(), [](bool b) { return b; });
                if (needs_isolation) {
                    builder.add_line(spacer_bank()[spacer_next % spacer_bank().size()]);
                    ++spacer_next;
                }
                builder.add_sentence(inst, rng);
                if (needs_isolation) {
                    builder.add_line(spacer_bank()[spacer_next % spacer_bank().size()]);
                    ++spacer_next;
                }
            }
            return true;
        };

        heading("CHIEF COMPLAINT:", "Chief Complaint:");
        emit_section(Sec::CC);
        const bool interim_heading = rng.bounded(2) == 0;
        heading(interim_heading ? "INTERIM HISTORY:" : "HISTORY:",
                interim_heading ? "Interim History:" : "History:");
        emit_section(Sec::Hist);
        if (options.out_of_lexicon_noise) {
            builder.add_line("Also reports vague qrxzith sensations without clear pattern.");
        }
        heading("VITAL SIGNS:", "Vital Signs:");
        emit_section(Sec::Vitals);
        heading("EXAMINATION:", "Examination:");
        emit_section(Sec::Exam);
        heading("LABS:", "Labs:");
        emit_section(Sec::Labs);
        heading("RADIOLOGY:", "Radiology:");
        emit_section(Sec::Rad);
        heading("IMPRESSION:", "Impression:");
        emit_section(Sec::Imp);
        heading("PLAN:", "Plan:");
        emit_section(Sec::Plan);
        if (sections.count(Sec::Edu)) {
            heading("INSTRUCTIONS:", "Instructions:");
            emit_section(Sec::Edu);
        }
        if (sections.count(Sec::Ret)) {
            heading("RETURN VISIT:", "Return Visit:");
            emit_section(Sec::Ret);
        }

        SourceNote note;
        note.accession_num = builder.ledger.accession_num;
        note.note_text = builder.text;
        corpus.notes.push_back(std::move(note));
        corpus.ledgers.push_back(std::move(builder.ledger));
    }
    return corpus;
}

} // namespace notestd
