#include "notestd/note_model.hpp"

#include "notestd/errors.hpp"
#include "notestd/text.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace notestd {

namespace {

enum class FieldType { Str, Int, StrList, Obj };

struct FieldSpec {
    const char* key;
    FieldType type;
    std::vector<FieldSpec> children;
};

// Single source of truth for the external schema: key names, nesting, types.
const std::vector<FieldSpec>& schema() {
    static const std::vector<FieldSpec> s = {
        {"HISTORY", FieldType::Obj, {
            {"Chief Complaint", FieldType::Str, {}},
            {"Interim History", FieldType::Str, {}},
        }},
        {"VITAL SIGNS", FieldType::Obj, {
            {"Blood Pressure", FieldType::Str, {}},
            {"Pulse", FieldType::Str, {}},
            {"Temperature", FieldType::Str, {}},
            {"Weight", FieldType::Str, {}},
        }},
        {"EXAMINATION", FieldType::Obj, {
            {"Mental Status", FieldType::Str, {}},
            {"Cranial Nerves", FieldType::Str, {}},
            {"Motor", FieldType::Str, {}},
            {"Sensory", FieldType::Str, {}},
            {"Reflexes", FieldType::Str, {}},
            {"Coordination", FieldType::Str, {}},
            {"Gait and Station", FieldType::Str, {}},
        }},
        {"LABS", FieldType::Str, {}},
        {"RADIOLOGY", FieldType::Str, {}},
        {"IMPRESSION", FieldType::Obj, {
            {"Assessment", FieldType::Str, {}},
        }},
        {"PLAN", FieldType::Obj, {
            {"Testing", FieldType::Str, {}},
            {"Education Provided", FieldType::Obj, {
                {"Instructions", FieldType::Str, {}},
                {"Barriers to Learning", FieldType::Str, {}},
                {"Content", FieldType::Str, {}},
                {"Outcome", FieldType::Str, {}},
            }},
            {"Return Visit", FieldType::Str, {}},
        }},
        {"Metrics", FieldType::Obj, {
            {"Grammatical Errors", FieldType::Int, {}},
            {"Abbreviations Expanded", FieldType::StrList, {}},
            {"Spelling Errors", FieldType::StrList, {}},
            {"Non-Standard Terms", FieldType::StrList, {}},
        }},
    };
    return s;
}

const char* type_name(FieldType t) {
    switch (t) {
        case FieldType::Str: return "string";
        case FieldType::Int: return "integer";
        case FieldType::StrList: return "list of strings";
        case FieldType::Obj: return "object";
    }
    return "?";
}

void validate_fields(const json& value, const std::vector<FieldSpec>& fields, const std::string& path,
                     std::vector<Violation>& out) {
    std::set<std::string> known;
    for (const auto& field : fields) known.insert(field.key);
    for (auto it = value.begin(); it != value.end(); ++it) {
        if (!known.count(it.key())) {
            out.push_back({path + "/" + it.key(), ViolationKind::UnknownKey, "key not in schema"});
        }
    }
    for (const auto& field : fields) {
        const std::string field_path = path + "/" + field.key;
        if (!value.contains(field.key)) {
            out.push_back({field_path, ViolationKind::MissingKey,
                           std::string("expected ") + type_name(field.type)});
            continue;
        }
        const json& v = value[field.key];
        switch (field.type) {
            case FieldType::Str:
                if (!v.is_string()) {
                    out.push_back({field_path, ViolationKind::WrongType, "expected string"});
                }
                break;
            case FieldType::Int:
                if (!v.is_number_integer() && !v.is_number_unsigned()) {
                    out.push_back({field_path, ViolationKind::WrongType, "expected integer"});
                } else if (v.get<long long>() < 0) {
                    out.push_back({field_path, ViolationKind::BadValue, "must be non-negative"});
                }
                break;
            case FieldType::StrList:
                if (!v.is_array()) {
                    out.push_back({field_path, ViolationKind::WrongType, "expected array of strings"});
                } else {
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (!v[i].is_string()) {
                            out.push_back({field_path + "/" + std::to_string(i),
                                           ViolationKind::WrongType, "expected string entry"});
                        } else if (v[i].get<std::string>().empty()) {
                            out.push_back({field_path + "/" + std::to_string(i),
                                           ViolationKind::BadValue, "entry must be non-empty"});
                        }
                    }
                }
                break;
            case FieldType::Obj:
                if (!v.is_object()) {
                    out.push_back({field_path, ViolationKind::WrongType, "expected object"});
                } else {
                    validate_fields(v, field.children, field_path, out);
                }
                break;
        }
    }
}

json coerce_fields(const json* value, const std::vector<FieldSpec>& fields, const std::string& path) {
    if (value) {
        if (!value->is_object()) {
            std::string where = path.empty() ? "/" : path;
            throw Error(ErrorKind::CoercionFailed,
                        where + ": expected object, got " + std::string(value->type_name()));
        }
        std::set<std::string> known;
        for (const auto& field : fields) known.insert(field.key);
        for (auto it = value->begin(); it != value->end(); ++it) {
            if (!known.count(it.key())) {
                throw Error(ErrorKind::CoercionFailed, path + "/" + it.key() + ": unknown key");
            }
        }
    }
    json out = json::object();
    for (const auto& field : fields) {
        const std::string field_path = path + "/" + field.key;
        const json* v = (value && value->contains(field.key)) ? &(*value)[field.key] : nullptr;
        switch (field.type) {
            case FieldType::Str:
                if (!v) {
                    out[field.key] = "";
                } else if (v->is_string()) {
                    out[field.key] = *v;
                } else {
                    throw Error(ErrorKind::CoercionFailed, field_path + ": expected string");
                }
                break;
            case FieldType::Int:
                if (!v) {
                    out[field.key] = 0;
                } else if ((v->is_number_integer() || v->is_number_unsigned()) &&
                           v->get<long long>() >= 0) {
                    out[field.key] = *v;
                } else {
                    throw Error(ErrorKind::CoercionFailed, field_path + ": expected non-negative integer");
                }
                break;
            case FieldType::StrList:
                if (!v) {
                    out[field.key] = json::array();
                } else if (v->is_array()) {
                    for (const auto& entry : *v) {
                        if (!entry.is_string() || entry.get<std::string>().empty()) {
                            throw Error(ErrorKind::CoercionFailed,
                                        field_path + ": entries must be non-empty strings");
                        }
                    }
                    out[field.key] = *v;
                } else {
                    throw Error(ErrorKind::CoercionFailed, field_path + ": expected array");
                }
                break;
            case FieldType::Obj:
                out[field.key] = coerce_fields(v, field.children, field_path);
                break;
        }
    }
    return out;
}

void collect_key_paths(const std::vector<FieldSpec>& fields, const std::string& path,
                       std::vector<std::string>& out) {
    for (const auto& field : fields) {
        std::string p = path + "/" + field.key;
        out.push_back(p);
        collect_key_paths(field.children, p, out);
    }
}

std::string strip_code_fences(const std::string& s) {
    std::size_t open = s.find("```");
    if (open == std::string::npos) return s;
    std::size_t body = open + 3;
    // optional language tag up to end of line
    std::size_t eol = s.find('\n', body);
    if (eol == std::string::npos) return s;
    std::size_t close = s.find("```", eol + 1);
    if (close == std::string::npos) return s;
    return s.substr(eol + 1, close - eol - 1);
}

std::string trim_to_braces(const std::string& s) {
    std::size_t first = s.find('{');
    std::size_t last = s.rfind('}');
    if (first == std::string::npos || last == std::string::npos || last < first) return s;
    return s.substr(first, last - first + 1);
}

std::string remove_trailing_commas(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            out.push_back(c);
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            out.push_back(c);
            continue;
        }
        if (c == ',') {
            std::size_t j = i + 1;
            while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && (s[j] == '}' || s[j] == ']')) continue; // drop the comma
        }
        out.push_back(c);
    }
    return out;
}

} // namespace

const char* violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::MissingKey: return "MissingKey";
        case ViolationKind::WrongType: return "WrongType";
        case ViolationKind::UnknownKey: return "UnknownKey";
        case ViolationKind::BadValue: return "BadValue";
    }
    return "?";
}

ValidationReport validate_note(const json& candidate) {
    ValidationReport report;
    if (!candidate.is_object()) {
        report.violations.push_back({"", ViolationKind::WrongType, "top-level value must be an object"});
        report.valid = false;
        return report;
    }
    validate_fields(candidate, schema(), "", report.violations);
    report.valid = report.violations.empty();
    return report;
}

json repair_json(const std::string& raw) {
    auto try_parse = [](const std::string& s) -> std::optional<json> {
        json v = json::parse(s, nullptr, false);
        if (v.is_discarded() || !v.is_object()) return std::nullopt;
        return v;
    };

    std::string attempt = raw;
    if (auto v = try_parse(attempt)) return *v;
    attempt = strip_code_fences(attempt);
    if (auto v = try_parse(attempt)) return *v;
    attempt = trim_to_braces(attempt);
    if (auto v = try_parse(attempt)) return *v;
    attempt = remove_trailing_commas(attempt);
    if (auto v = try_parse(attempt)) return *v;
    throw Error(ErrorKind::Unrepairable, "no JSON object found after repair passes");
}

StandardizedNote coerce_note(const json& candidate) {
    json full = coerce_fields(&candidate, schema(), "");

    StandardizedNote note;
    const json& h = full["HISTORY"];
    note.history.chief_complaint = h["Chief Complaint"];
    note.history.interim_history = h["Interim History"];
    const json& vs = full["VITAL SIGNS"];
    note.vital_signs.blood_pressure = vs["Blood Pressure"];
    note.vital_signs.pulse = vs["Pulse"];
    note.vital_signs.temperature = vs["Temperature"];
    note.vital_signs.weight = vs["Weight"];
    const json& ex = full["EXAMINATION"];
    note.examination.mental_status = ex["Mental Status"];
    note.examination.cranial_nerves = ex["Cranial Nerves"];
    note.examination.motor = ex["Motor"];
    note.examination.sensory = ex["Sensory"];
    note.examination.reflexes = ex["Reflexes"];
    note.examination.coordination = ex["Coordination"];
    note.examination.gait_and_station = ex["Gait and Station"];
    note.labs = full["LABS"];
    note.radiology = full["RADIOLOGY"];
    note.impression.assessment = full["IMPRESSION"]["Assessment"];
    const json& plan = full["PLAN"];
    note.plan.testing = plan["Testing"];
    const json& edu = plan["Education Provided"];
    note.plan.education_provided.instructions = edu["Instructions"];
    note.plan.education_provided.barriers_to_learning = edu["Barriers to Learning"];
    note.plan.education_provided.content = edu["Content"];
    note.plan.education_provided.outcome = edu["Outcome"];
    note.plan.return_visit = plan["Return Visit"];
    const json& metrics = full["Metrics"];
    note.metrics.grammatical_errors = metrics["Grammatical Errors"].get<long>();
    note.metrics.abbreviations_expanded = metrics["Abbreviations Expanded"].get<std::vector<std::string>>();
    note.metrics.spelling_errors = metrics["Spelling Errors"].get<std::vector<std::string>>();
    note.metrics.non_standard_terms = metrics["Non-Standard Terms"].get<std::vector<std::string>>();
    return note;
}

ordered_json note_to_json(const StandardizedNote& note) {
    ordered_json out;
    out["HISTORY"] = {
        {"Chief Complaint", note.history.chief_complaint},
        {"Interim History", note.history.interim_history},
    };
    out["VITAL SIGNS"] = {
        {"Blood Pressure", note.vital_signs.blood_pressure},
        {"Pulse", note.vital_signs.pulse},
        {"Temperature", note.vital_signs.temperature},
        {"Weight", note.vital_signs.weight},
    };
    out["EXAMINATION"] = {
        {"Mental Status", note.examination.mental_status},
        {"Cranial Nerves", note.examination.cranial_nerves},
        {"Motor", note.examination.motor},
        {"Sensory", note.examination.sensory},
        {"Reflexes", note.examination.reflexes},
        {"Coordination", note.examination.coordination},
        {"Gait and Station", note.examination.gait_and_station},
    };
    out["LABS"] = note.labs;
    out["RADIOLOGY"] = note.radiology;
    out["IMPRESSION"] = {{"Assessment", note.impression.assessment}};
    out["PLAN"] = {
        {"Testing", note.plan.testing},
        {"Education Provided",
         {
             {"Instructions", note.plan.education_provided.instructions},
             {"Barriers to Learning", note.plan.education_provided.barriers_to_learning},
             {"Content", note.plan.education_provided.content},
             {"Outcome", note.plan.education_provided.outcome},
         }},
        {"Return Visit", note.plan.return_visit},
    };
    out["Metrics"] = {
        {"Grammatical Errors", note.metrics.grammatical_errors},
        {"Abbreviations Expanded", note.metrics.abbreviations_expanded},
        {"Spelling Errors", note.metrics.spelling_errors},
        {"Non-Standard Terms", note.metrics.non_standard_terms},
    };
    return out;
}

StandardizedNote note_from_json(const json& value) {
    return coerce_note(value);
}

std::string serialize_note_pretty(const StandardizedNote& note) {
    return note_to_json(note).dump(4);
}

std::string serialize_note_compact(const StandardizedNote& note) {
    return note_to_json(note).dump();
}

const std::vector<std::string>& schema_key_paths() {
    static const std::vector<std::string> paths = [] {
        std::vector<std::string> out;
        collect_key_paths(schema(), "", out);
        return out;
    }();
    return paths;
}

std::vector<LeafRef> note_content_leaves(const StandardizedNote& note) {
    return {
        {"HISTORY/Chief Complaint", &note.history.chief_complaint},
        {"HISTORY/Interim History", &note.history.interim_history},
        {"VITAL SIGNS/Blood Pressure", &note.vital_signs.blood_pressure},
        {"VITAL SIGNS/Pulse", &note.vital_signs.pulse},
        {"VITAL SIGNS/Temperature", &note.vital_signs.temperature},
        {"VITAL SIGNS/Weight", &note.vital_signs.weight},
        {"EXAMINATION/Mental Status", &note.examination.mental_status},
        {"EXAMINATION/Cranial Nerves", &note.examination.cranial_nerves},
        {"EXAMINATION/Motor", &note.examination.motor},
        {"EXAMINATION/Sensory", &note.examination.sensory},
        {"EXAMINATION/Reflexes", &note.examination.reflexes},
        {"EXAMINATION/Coordination", &note.examination.coordination},
        {"EXAMINATION/Gait and Station", &note.examination.gait_and_station},
        {"LABS", &note.labs},
        {"RADIOLOGY", &note.radiology},
        {"IMPRESSION/Assessment", &note.impression.assessment},
        {"PLAN/Testing", &note.plan.testing},
        {"PLAN/Education Provided/Instructions", &note.plan.education_provided.instructions},
        {"PLAN/Education Provided/Barriers to Learning", &note.plan.education_provided.barriers_to_learning},
        {"PLAN/Education Provided/Content", &note.plan.education_provided.content},
        {"PLAN/Education Provided/Outcome", &note.plan.education_provided.outcome},
        {"PLAN/Return Visit", &note.plan.return_visit},
    };
}

std::string* leaf_by_path(StandardizedNote& note, const std::string& path) {
    auto leaves = note_content_leaves(note);
    for (const auto& leaf : leaves) {
        if (leaf.path == path) return const_cast<std::string*>(leaf.value);
    }
    return nullptr;
}

const std::vector<std::string>& schema_key_tokens() {
    static const std::vector<std::string> tokens = [] {
        std::vector<std::string> out;
        for (const auto& path : schema_key_paths()) {
            std::size_t slash = path.rfind('/');
            std::string last = slash == std::string::npos ? path : path.substr(slash + 1);
            for (auto& t : text::tokenize_alnum_lower(last)) out.push_back(std::move(t));
        }
        return out;
    }();
    return tokens;
}

} // namespace notestd
