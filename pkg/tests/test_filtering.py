from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retroscope.corpus import Document, MovementSpec
from retroscope.errors import DataError
from retroscope.filtering import (
    CooccurrenceStats,
    HighSalienceVocabulary,
    assign_layers,
    assignment_to_csv,
    cooccurrence_counts,
    exclusive_counts,
    high_salience_vocabulary,
    layer_summary,
    select_layer,
    vocabulary_coverage,
)

METOO = MovementSpec.of("metoo", ["#metoo"])


def doc(doc_id, title="", body="", keywords=(), platform="news"):
    return Document(
        id=doc_id,
        platform=platform,
        published_at=datetime(2024, 11, 1, tzinfo=timezone.utc),
        title=title,
        body=body,
        keywords=frozenset(keywords),
    )


# ---------------------------------------------------------------------------
# cooccurrence_counts
# ---------------------------------------------------------------------------

def test_cooccurrence_toy_corpus():
    corpus = [
        doc("d1", title="#MeToo now", keywords={"a", "b"}),
        doc("d2", body="more #metoo talk", keywords={"b", "c"}),
        doc("d3", body="unrelated", keywords={"a", "z"}),
    ]
    stats = cooccurrence_counts(corpus, METOO)
    assert stats.counts == {"a": 1, "b": 2, "c": 1}
    assert stats.l0_size == 2


def test_cooccurrence_seeds_excluded():
    corpus = [doc("d1", title="#MeToo", keywords={"#metoo", "a"})]
    stats = cooccurrence_counts(corpus, METOO)
    assert "#metoo" not in stats.counts
    assert stats.counts == {"a": 1}


def test_cooccurrence_empty_keyword_set_counts_l0():
    corpus = [
        doc("d1", title="#MeToo", keywords=set()),
        doc("d2", title="#MeToo", keywords={"a"}),
    ]
    stats = cooccurrence_counts(corpus, METOO)
    assert stats.l0_size == 2
    assert stats.counts == {"a": 1}


def test_cooccurrence_empty_l0_errors():
    with pytest.raises(DataError, match="no explicit-mention"):
        cooccurrence_counts([doc("d1", body="nothing here")], METOO)


# ---------------------------------------------------------------------------
# high_salience_vocabulary
# ---------------------------------------------------------------------------

def test_percentile_nearest_rank_100_terms():
    counts = {f"t{i}": i for i in range(1, 101)}
    vocab = high_salience_vocabulary(CooccurrenceStats(counts, l0_size=100))
    assert vocab.percentile_threshold == 99
    assert vocab.terms == {"t99", "t100"}


def test_percentile_single_term():
    vocab = high_salience_vocabulary(CooccurrenceStats({"x": 5}, l0_size=5))
    assert vocab.terms == {"x"}
    assert vocab.percentile_threshold == 5


def test_percentile_all_tied():
    counts = {f"t{i}": 3 for i in range(10)}
    vocab = high_salience_vocabulary(CooccurrenceStats(counts, l0_size=4))
    assert vocab.terms == frozenset(counts)


def test_percentile_empty_errors():
    with pytest.raises(DataError):
        high_salience_vocabulary(CooccurrenceStats({}, l0_size=3))


def test_vocabulary_members_meet_threshold():
    counts = {"a": 1, "b": 7, "c": 4, "d": 7, "e": 2}
    vocab = high_salience_vocabulary(CooccurrenceStats(counts, l0_size=9), percentile=60)
    assert all(counts[t] >= vocab.percentile_threshold for t in vocab.terms)


@given(st.dictionaries(st.text("abcdef", min_size=1, max_size=4),
                       st.integers(1, 50), min_size=1, max_size=30))
def test_vocabulary_antitone_in_percentile(counts):
    stats = CooccurrenceStats(counts, l0_size=50)
    lower = high_salience_vocabulary(stats, percentile=50)
    higher = high_salience_vocabulary(stats, percentile=99)
    assert higher.terms <= lower.terms


# ---------------------------------------------------------------------------
# assign_layers
# ---------------------------------------------------------------------------

VOCAB10 = HighSalienceVocabulary(
    terms=frozenset(f"term{i}" for i in range(10)), percentile_threshold=1
)


def test_seed_in_title_is_layer_zero():
    corpus = [doc("d1", title="Why #MeToo matters", keywords=set(VOCAB10.terms))]
    assignment = assign_layers(corpus, VOCAB10, METOO)
    assert assignment.layer_of["d1"] == 0


def test_forty_percent_coverage_is_layer_one():
    corpus = [doc("d1", keywords={"term0", "term1", "term2", "term3"})]
    assignment = assign_layers(corpus, VOCAB10, METOO)
    assert assignment.layer_of["d1"] == 1


def test_twenty_percent_coverage_is_layer_five():
    corpus = [doc("d1", keywords={"term0", "term1"})]
    assignment = assign_layers(corpus, VOCAB10, METOO)
    assert assignment.layer_of["d1"] == 5


def test_below_five_percent_unassigned():
    vocab = HighSalienceVocabulary(
        terms=frozenset(f"w{i}" for i in range(25)), percentile_threshold=1
    )
    corpus = [doc("d1", keywords={"w0"})]  # 4% coverage
    assignment = assign_layers(corpus, vocab, METOO)
    assert "d1" not in assignment.layer_of


def test_coverage_via_text_tokens():
    corpus = [doc("d1", body="term0 and term1, also term2 term3!")]
    assignment = assign_layers(corpus, VOCAB10, METOO)
    assert assignment.layer_of["d1"] == 1


def test_multiword_vocab_term_matches_text():
    vocab = HighSalienceVocabulary(terms=frozenset({"police reform"}), percentile_threshold=1)
    covered = vocabulary_coverage(doc("d1", body="calls for Police Reform grew"), vocab)
    assert covered == 1.0


def test_seed_word_boundary_semantics():
    corpus = [
        doc("d1", body="join #MeToo today"),
        doc("d2", body="the metoograph device"),
    ]
    assignment = assign_layers(corpus, VOCAB10, METOO)
    assert assignment.layer_of.get("d1") == 0
    assert assignment.layer_of.get("d2") != 0


def test_assignment_order_invariant():
    docs = [
        doc("a", title="#metoo", keywords={"term0"}),
        doc("b", keywords={"term0", "term1", "term2"}),
        doc("c", keywords=set()),
    ]
    forward = assign_layers(docs, VOCAB10, METOO)
    backward = assign_layers(list(reversed(docs)), VOCAB10, METOO)
    assert forward.layer_of == backward.layer_of


def test_adding_seed_moves_to_l0():
    base = doc("d1", title="plain title", keywords={"term0", "term1"})
    with_seed = doc("d1", title="plain title #metoo", keywords={"term0", "term1"})
    assert assign_layers([base], VOCAB10, METOO).layer_of["d1"] == 5
    assert assign_layers([with_seed], VOCAB10, METOO).layer_of["d1"] == 0


# ---------------------------------------------------------------------------
# select_layer
# ---------------------------------------------------------------------------

def toy_assignment():
    return assign_layers(
        [
            doc("d1", title="#metoo story"),
            doc("d2", keywords={"term0", "term1", "term2", "term3"}),
        ],
        VOCAB10,
        METOO,
    )


def test_select_cumulative_union():
    assignment = toy_assignment()
    assert select_layer(assignment, 5, "cumulative") == {"d1", "d2"}
    assert select_layer(assignment, 0, "cumulative") == {"d1"}


def test_select_exclusive():
    assignment = toy_assignment()
    assert select_layer(assignment, 1, "exclusive") == {"d2"}
    assert select_layer(assignment, 5, "exclusive") == set()


def test_select_out_of_range():
    with pytest.raises(ValueError):
        select_layer(toy_assignment(), 9)


def test_cumulative_nesting():
    assignment = toy_assignment()
    for j in range(8):
        assert select_layer(assignment, j) <= select_layer(assignment, j + 1)


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from(["#metoo story", "other"]),
                          st.sets(st.sampled_from(sorted(VOCAB10.terms)), max_size=10)),
                max_size=12))
def test_exclusive_layers_partition(items):
    docs = [doc(f"d{i}", title=t, keywords=k) for i, (t, k) in enumerate(items)]
    assignment = assign_layers(docs, VOCAB10, METOO)
    union = set()
    total = 0
    for j in range(9):
        ids = select_layer(assignment, j, "exclusive")
        assert not (ids & union)
        union |= ids
        total += len(ids)
    assert total == len(assignment.layer_of)


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def test_assignment_csv():
    text = assignment_to_csv(toy_assignment())
    assert text.splitlines()[0] == "document_id,layer"
    assert "d1,0" in text
    assert "d2,1" in text


def test_layer_summary_counts():
    assignment = toy_assignment()
    summary = layer_summary(assignment)
    assert summary["exclusive"][0] == 1
    assert summary["exclusive"][1] == 1
    assert summary["cumulative"][8] == 2
    assert exclusive_counts(assignment)[0] == 1


def test_layer_summary_by_platform():
    docs = [
        doc("d1", title="#metoo", platform="news"),
        doc("d2", title="#metoo", platform="reddit"),
    ]
    assignment = assign_layers(docs, VOCAB10, METOO)
    summary = layer_summary(assignment, docs)
    assert summary["exclusive_by_platform"]["news"][0] == 1
    assert summary["cumulative_by_platform"]["reddit"][8] == 1
