import numpy as np
import pytest

from bishop.errors import ColourModelError, LexiconError
from bishop.lexicon import (
    LEXICON_FORMAT,
    dump_lexicon,
    fit_colour_model,
    load_lexicon,
)


def minimal_doc(**overrides):
    doc = {
        "format": LEXICON_FORMAT,
        "colour_models": [
            {"name": "green", "mean": [60, 170, 70],
             "cov": [[25, 0, 0], [0, 25, 0], [0, 0, 25]]},
        ],
        "entries": [
            {"word": "leftmost", "category": "ADJ", "arity": 1, "ref": "none",
             "composer": {"kind": "ordering_extremum", "axis": "x",
                          "mode": "min"}},
        ],
        "grammar": [
            {"head": "NP", "tail": ["N"], "templates": [{"fn": 0, "args": []}]},
        ],
    }
    doc.update(overrides)
    return doc


def test_load_minimal_lexicon():
    lex = load_lexicon(minimal_doc())
    assert len(lex.lookup("leftmost")) == 1
    assert lex.lookup("leftmost")[0].composer_kind == "ordering_extremum"


def test_spatial_arity_one_is_rejected():
    doc = minimal_doc(entries=[
        {"word": "left", "category": "N", "arity": 1, "ref": "single",
         "composer": {"kind": "spatial", "direction": "left"}},
    ])
    with pytest.raises(LexiconError, match="cannot take 1"):
        load_lexicon(doc)


def test_unknown_composer_kind_rejected():
    doc = minimal_doc(entries=[
        {"word": "x", "category": "N", "arity": 0, "ref": "single",
         "composer": {"kind": "telepathy"}},
    ])
    with pytest.raises(LexiconError, match="telepathy"):
        load_lexicon(doc)


def test_dangling_colour_model_rejected():
    doc = minimal_doc(entries=[
        {"word": "mauve", "category": "N", "arity": 0, "ref": "single",
         "composer": {"kind": "colour_probabilistic", "model": "mauve"}},
    ])
    with pytest.raises(LexiconError, match="mauve"):
        load_lexicon(doc)


def test_duplicate_entries_rejected():
    e = {"word": "one", "category": "N", "arity": 0, "ref": "single",
         "composer": {"kind": "identity"}}
    with pytest.raises(LexiconError, match="duplicate"):
        load_lexicon(minimal_doc(entries=[e, dict(e)]))


def test_error_messages_carry_a_locus():
    doc = minimal_doc(entries=[
        {"word": "BAD", "category": "N", "arity": 0, "ref": "single",
         "composer": {"kind": "identity"}},
    ])
    with pytest.raises(LexiconError, match=r"entries\[0\]"):
        load_lexicon(doc)


def test_wrong_format_rejected():
    with pytest.raises(LexiconError):
        load_lexicon(minimal_doc(format="bishop-lexicon v999"))


def test_lookup_unknown_word_is_empty(lexicon):
    assert lexicon.lookup("zzzq") == []


def test_packaged_purple_has_adjective_and_noun_senses(lexicon):
    categories = {e.category for e in lexicon.lookup("purple")}
    assert {"CADJ", "N"} <= categories
    kinds = {e.composer_kind for e in lexicon.lookup("purple")}
    assert kinds == {"colour_probabilistic"}


def test_packaged_left_has_ordering_and_spatial_senses(lexicon):
    kinds = {e.composer_kind for e in lexicon.lookup("left")}
    assert {"ordering_extremum", "spatial"} <= kinds
    assert len(lexicon.lookup("left")) >= 2


def test_packaged_the_is_a_selector(lexicon):
    entries = lexicon.lookup("the")
    assert len(entries) == 1
    assert entries[0].category == "ART"
    assert entries[0].composer_kind == "select"


def test_round_trip_is_semantically_idempotent(lexicon):
    doc = dump_lexicon(lexicon)
    reloaded = load_lexicon(doc)
    assert dump_lexicon(reloaded) == doc
    assert reloaded.words() == lexicon.words()
    assert len(reloaded.grammar) == len(lexicon.grammar) == 19


# -- colour model fitting -------------------------------------------------------

def test_fit_rejects_constant_samples():
    with pytest.raises(ColourModelError, match="zero-variance"):
        fit_colour_model("flat", [[10, 10, 10]] * 8)


def test_fit_rejects_tiny_sample_sets():
    with pytest.raises(ColourModelError):
        fit_colour_model("few", [[1, 2, 3], [4, 5, 6], [7, 8, 9]])


def test_fit_recovers_known_gaussian():
    rng = np.random.default_rng(5)
    true_mean = np.array([100.0, 60.0, 140.0])
    true_cov = np.diag([16.0, 9.0, 25.0])
    n = 500
    samples = rng.multivariate_normal(true_mean, true_cov, size=n)
    model = fit_colour_model("known", samples)
    for k in range(3):
        sigma = np.sqrt(true_cov[k, k])
        assert abs(model.mean[k] - true_mean[k]) < 3 * sigma / np.sqrt(n)


def test_density_peaks_at_the_mean():
    rng = np.random.default_rng(6)
    samples = rng.multivariate_normal([50, 60, 70], np.eye(3) * 4, size=200)
    model = fit_colour_model("peaked", samples)
    peak = model.pdf(model.mean)
    eigvals, eigvecs = np.linalg.eigh(model.cov)
    for k in range(3):
        away = model.mean + 3 * np.sqrt(eigvals[k]) * eigvecs[:, k]
        assert peak >= model.pdf(away)
    assert peak == pytest.approx(model.peak_density())


def test_packaged_lexicon_covers_regression_corpus(lexicon):
    import json
    from importlib import resources

    from bishop.parser import tokenize

    corpus = resources.files("bishop").joinpath(
        "data/corpus/regression.jsonl").read_text()
    deliberate_fillers = {"um", "last"}
    missing = set()
    for line in corpus.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        for token in tokenize(record["utterance"]):
            if not lexicon.lookup(token):
                missing.add(token)
    assert missing <= deliberate_fillers


def test_fit_handles_rank_deficient_scatter_with_jitter():
    # samples on a plane: singular ML covariance, fixed by the jitter
    rng = np.random.default_rng(8)
    base = rng.normal(size=(50, 2)) * 5 + 100
    samples = np.column_stack([base[:, 0], base[:, 1],
                               base[:, 0] + base[:, 1]])
    model = fit_colour_model("planar", samples)
    assert np.isfinite(model.pdf(model.mean))
