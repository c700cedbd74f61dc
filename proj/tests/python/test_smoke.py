"""Smoke tests for the python bindings: drive the main operations end to end
on a small synthetic corpus."""

import json
import os

import pytest

import notestd


@pytest.fixture(scope="module")
def resources():
    return notestd.load_resources(notestd.resource_dir())


@pytest.fixture(scope="module")
def corpus():
    notes, ledgers = notestd.generate_corpus(8, seed=2024)
    return notes, [json.loads(l) for l in ledgers]


def test_generate_is_deterministic():
    a, _ = notestd.generate_corpus(3, seed=5)
    b, _ = notestd.generate_corpus(3, seed=5)
    assert [n.note_text for n in a] == [n.note_text for n in b]
    assert [n.accession_num for n in a] == ["1", "2", "3"]


def test_standardize_matches_ledger(resources, corpus):
    notes, ledgers = corpus
    for note, ledger in zip(notes, ledgers):
        doc = json.loads(notestd.standardize_note(note, resources))
        metrics = doc["Metrics"]
        expected = ledger["expected_counts"]
        assert metrics["Grammatical Errors"] == expected["grammatical_errors"]
        assert len(metrics["Spelling Errors"]) == expected["spelling_errors"]
        assert len(metrics["Abbreviations Expanded"]) == expected["abbreviations_expanded"]
        assert len(metrics["Non-Standard Terms"]) == expected["non_standard_terms"]


def test_canonical_keys(resources, corpus):
    notes, _ = corpus
    doc = json.loads(notestd.standardize_note(notes[0], resources))
    assert set(doc) == {
        "HISTORY", "VITAL SIGNS", "EXAMINATION", "LABS", "RADIOLOGY",
        "IMPRESSION", "PLAN", "Metrics",
    }
    assert len(notestd.schema_key_paths()) == 33


def test_validation_and_repair():
    valid, violations = notestd.validate_note("{}")
    assert not valid
    assert len(violations) == 8

    repaired = json.loads(notestd.repair_json('```json\n{"a": 1,}\n```'))
    assert repaired == {"a": 1}

    with pytest.raises(notestd.NotestdError):
        notestd.repair_json("no json here")


def test_corpus_roundtrip_and_filter(tmp_path):
    notes, _ = notestd.generate_corpus(4, seed=9)
    path = str(tmp_path / "notes.jsonl")
    assert notestd.write_notes_jsonl(notes, path) == 4
    back = notestd.read_notes_jsonl(path)
    assert [n.note_text for n in back] == [n.note_text for n in notes]

    kept = notestd.filter_notes(notes, min_chars=10)
    assert len(kept) == 4
    assert notestd.filter_notes(notes, min_chars=10**7) == []


def test_extraction_and_bundle(resources, corpus):
    notes, _ = corpus
    gaz_dir = notestd.resource_dir()
    meds = notestd.load_gazetteer(os.path.join(gaz_dir, "gazetteer_medications.json"))
    findings = notestd.load_gazetteer(os.path.join(gaz_dir, "gazetteer_findings.json"))
    concept_map = notestd.load_concept_map(os.path.join(gaz_dir, "concept_map.json"))

    mentions = []
    for note in notes:
        std = notestd.standardize_note(note, resources)
        mentions += notestd.extract_medications(note.accession_num, std, meds)
        mentions += notestd.extract_findings(note.accession_num, std, findings)
    assert mentions, "fixture corpus should contain known medications and findings"
    for mention in mentions:
        if mention.kind == "Medication":
            assert mention.section_path.startswith("PLAN")
        else:
            assert mention.section_path.split("/")[0] in {
                "HISTORY", "EXAMINATION", "IMPRESSION",
            }

    table = notestd.frequency_table(mentions, "Medication")
    assert all(count >= 1 for _, count in table)

    bundle = json.loads(notestd.bundle_mentions(mentions, concept_map))
    assert bundle["resourceType"] == "Bundle"
    assert len(bundle["entry"]) == len(mentions)


def test_evaluation_surface(resources, corpus):
    notes, _ = corpus
    std = notestd.standardize_note(notes[0], resources)
    diff = notestd.completeness_check(notes[0], std)
    assert diff["missing_tokens"] == []

    ratings = notestd.rate_quality(notes[0], std, resources)
    assert ratings["completeness"] == 5
    assert set(ratings) == {
        "text_organization", "spelling_and_grammar", "abbreviation_expansion",
        "terminology_standardization", "completeness",
    }

    sample = notestd.sample_for_review(notes, n=3, seed=1)
    assert len(sample) == 3
    assert sample[0].accession_num == notestd.sample_for_review(notes, n=3, seed=1)[0].accession_num


def test_prompt_and_estimate():
    note = notestd.SourceNote("1", "x" * 6420)
    prompt = notestd.build_prompt(note)
    assert "Expand abbreviations to full words" in prompt
    assert prompt.endswith(note.note_text)

    estimate = notestd.estimate_cost([note])
    assert estimate["serial_seconds"] == pytest.approx(20.0)


def test_corpus_summary(resources, corpus):
    notes, _ = corpus
    standardized = [notestd.standardize_note(n, resources) for n in notes]
    summary = json.loads(notestd.corpus_summary(notes, standardized, bins=5))
    assert summary["n"] == len(notes)
    assert "grammatical_errors" in summary["metrics"]
    hist = summary["metrics"]["source_chars"]["histogram"]
    assert sum(hist["counts"]) == len(notes)
