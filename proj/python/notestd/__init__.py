"""Clinical note standardization pipeline.

The heavy lifting lives in the C++ extension module; this package re-exports
its surface. Standardized notes, summaries, and bundles travel as JSON
strings, so ``json.loads`` gives plain dictionaries.
"""

from notestd._core import (  # noqa: F401
    ConceptMap,
    Gazetteer,
    Mention,
    NotestdError,
    SourceNote,
    StandardizationResources,
    build_prompt,
    bundle_mentions,
    coerce_note,
    completeness_check,
    corpus_summary,
    estimate_cost,
    extract_findings,
    extract_medications,
    filter_notes,
    frequency_table,
    generate_corpus,
    load_concept_map,
    load_gazetteer,
    load_resources,
    parse_corpus_csv,
    rate_quality,
    read_notes_jsonl,
    repair_json,
    sample_for_review,
    schema_key_paths,
    standardize_corpus,
    standardize_note,
    validate_note,
    write_notes_jsonl,
)

__all__ = [
    "ConceptMap",
    "Gazetteer",
    "Mention",
    "NotestdError",
    "SourceNote",
    "StandardizationResources",
    "build_prompt",
    "bundle_mentions",
    "coerce_note",
    "completeness_check",
    "corpus_summary",
    "estimate_cost",
    "extract_findings",
    "extract_medications",
    "filter_notes",
    "frequency_table",
    "generate_corpus",
    "load_concept_map",
    "load_gazetteer",
    "load_resources",
    "parse_corpus_csv",
    "rate_quality",
    "read_notes_jsonl",
    "repair_json",
    "resource_dir",
    "sample_for_review",
    "schema_key_paths",
    "standardize_corpus",
    "standardize_note",
    "validate_note",
    "write_notes_jsonl",
]

__version__ = "0.1.0"


def resource_dir():
    """Directory with the shipped lexicons and gazetteers.

    Honors NOTESTD_RESOURCES, falls back to the copy installed inside the
    package, then to ./resources for source checkouts.
    """
    import os

    env = os.environ.get("NOTESTD_RESOURCES")
    if env:
        return env
    bundled = os.path.join(os.path.dirname(__file__), "resources")
    if os.path.isdir(bundled):
        return bundled
    return "resources"
