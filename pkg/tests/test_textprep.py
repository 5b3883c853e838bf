import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divsum.exceptions import ConfigurationError, DegenerateInputError
from divsum.textprep import (
    Cluster,
    Document,
    IdentityStemmer,
    LightSuffixStemmer,
    TextPreprocessor,
    build_bag_of_words,
    get_stemmer,
    load_abbreviations,
    load_stopwords,
    make_sentence,
    segment_sentences,
    tokenize_filter_stem,
    word_tokens,
)


def test_segment_basic_split():
    assert segment_sentences("Primeira frase. Segunda frase! Terceira?") == [
        "Primeira frase.",
        "Segunda frase!",
        "Terceira?",
    ]


def test_segment_needs_capital_or_digit_after_period():
    assert segment_sentences("Valor de 3.5 milhões. ok então") == ["Valor de 3.5 milhões. ok então"]
    assert segment_sentences("Fim. 17 pessoas morreram.") == ["Fim.", "17 pessoas morreram."]


def test_segment_abbreviations_and_initials():
    abbr = load_abbreviations("pt")
    text = "O Sr. Silva chegou. J. K. Rowling escreveu."
    assert segment_sentences(text, abbr) == ["O Sr. Silva chegou.", "J. K. Rowling escreveu."]


def test_segment_closing_quote_and_blank_lines():
    text = "Ele disse: “Não houve sobreviventes.” Depois saiu.\n\nnovo parágrafo sem ponto"
    assert segment_sentences(text) == [
        "Ele disse: “Não houve sobreviventes.”",
        "Depois saiu.",
        "novo parágrafo sem ponto",
    ]


def test_segment_empty():
    assert segment_sentences("") == []
    assert segment_sentences("   \n\n  ") == []


@given(st.text(alphabet="ab .!?\nSr", max_size=60))
@settings(max_examples=300)
def test_segmentation_drops_only_whitespace(text):
    joined = "".join(segment_sentences(text, load_abbreviations("pt")))
    assert "".join(joined.split()) == "".join(text.split())


def test_fixture_sentence_counts(sanguessugas, congo):
    assert len(sanguessugas.sentences) == 23
    assert [len(d.sentences) for d in congo.documents] == [8, 7, 5]


def test_word_tokens_keep_hyphenated_words():
    assert word_tokens("quinta-feira, às 20 horas (RDC)") == ["quinta-feira", "às", "20", "horas", "RDC"]


def test_tokenize_filters_stopwords_and_stems():
    stop = load_stopwords("pt")
    toks = tokenize_filter_stem("Os deputados acusados renunciaram ao mandato", stop, "light", "pt")
    stems = [t.stem for t in toks]
    assert "os" not in stems and "ao" not in stems
    assert all(t.stem == t.stem.lower() and t.stem for t in toks)
    assert [t.position for t in toks] == [1, 2, 3, 5]


def test_tokenize_identity_examples():
    assert [t.stem for t in tokenize_filter_stem("o avião caiu", {"o"}, "identity", "pt")] == ["avião", "caiu"]
    assert [t.stem for t in tokenize_filter_stem("A A b", set(), "identity", "pt")] == ["a", "a", "b"]
    assert [t.stem for t in tokenize_filter_stem("renunciar renúncia", set(), "light", "pt")] == ["renunc"] * 2


def test_sentence_word_count_and_invariants():
    s = make_sentence(0, "A aeronave caiu , em chamas.", load_stopwords("pt"), "light")
    assert s.raw_word_count == 6
    assert s.raw_word_count >= len(s.tokens)


def test_light_stemmer_conflates_inflections():
    stem = LightSuffixStemmer("pt")
    assert stem("deputados") == stem("deputado")
    assert stem("renúncia") == stem("renuncia")
    assert stem("2009") == "2009"


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzáéíóúçãõ", min_size=1, max_size=14))
@settings(max_examples=300, deadline=None)
def test_light_stemmer_idempotent(word):
    for lang in ("pt", "fr", "en", "es"):
        stem = LightSuffixStemmer(lang)
        once = stem(word)
        assert once and stem(once) == once


def test_get_stemmer_variants():
    assert isinstance(get_stemmer("identity"), IdentityStemmer)
    assert get_stemmer("light-fr").language == "fr"
    f = str.upper
    assert get_stemmer(f) is f
    with pytest.raises(ConfigurationError):
        get_stemmer("porter")
    with pytest.raises(ConfigurationError):
        get_stemmer("light-xx")


def test_bundled_resources_load():
    for lang in ("pt", "fr", "en", "es"):
        assert len(load_stopwords(lang)) > 50
        assert all(a.endswith(".") for a in load_abbreviations(lang))


def test_custom_stopword_file(tmp_path):
    p = tmp_path / "stop.txt"
    p.write_text("# comment\nAvião\n\nqueda\n", encoding="utf-8")
    words = load_stopwords(path=p)
    assert words == frozenset({"avião", "queda"})


def test_bag_of_words_matrix():
    sents = [make_sentence(i, t) for i, t in enumerate(["a b a", "b c", "d"])]
    bow = build_bag_of_words(sents)
    assert bow.vocabulary.word_to_column == {"a": 0, "b": 1, "c": 2, "d": 3}
    np.testing.assert_array_equal(bow.matrix, [[2, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
    assert bow.n_s == 3 and bow.n_p == 4
    with pytest.raises(ValueError):
        bow.matrix[0, 0] = 5


def test_bag_of_words_degenerate():
    with pytest.raises(DegenerateInputError):
        build_bag_of_words([])
    with pytest.raises(DegenerateInputError):
        build_bag_of_words([make_sentence(0, "o a de", load_stopwords("pt"))])


@given(st.lists(st.lists(st.sampled_from("abcdef"), max_size=6), min_size=1, max_size=6))
def test_bag_of_words_row_sums(rows):
    sents = [make_sentence(i, " ".join(r)) for i, r in enumerate(rows)]
    if not any(rows):
        return
    bow = build_bag_of_words(sents)
    assert bow.matrix.sum(axis=1).tolist() == [len(r) for r in rows]


def test_preprocessor_title_and_line_breaks():
    prep = TextPreprocessor(language="pt", title=True)
    doc = prep.make_document("Queda de avião\nO avião caiu. Todos morreram.")
    assert doc.title.original_text == "Queda de avião"
    assert len(doc.sentences) == 2
    lines = TextPreprocessor(language="fr", line_breaks=True).make_document("bonjour madame\nje vous écoute")
    assert [s.original_text for s in lines.sentences] == ["bonjour madame", "je vous écoute"]


def test_document_and_cluster_invariants():
    s0 = make_sentence(0, "um dois")
    s2 = make_sentence(2, "tres")
    with pytest.raises(ValueError):
        Document("d", (s0, s2))
    with pytest.raises(ValueError):
        Cluster("c", ())
    doc = Document("d", (s0,))
    assert Cluster("c", (doc, doc)).word_count == 4


def test_preprocessor_is_sklearn_estimator():
    from sklearn.base import clone

    prep = TextPreprocessor(language="fr", stemmer="identity")
    assert clone(prep).get_params()["language"] == "fr"
    docs = prep.fit().transform(["Un. Deux.", "Trois."])
    assert [len(d.sentences) for d in docs] == [2, 1]
    with pytest.raises(TypeError):
        prep.transform("Un. Deux.")
