from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topicsum.cleaning import (CleaningContext, PhraseModel, apply_phrases,
                               clean_document, learn_phrases, lemma,
                               lemmatize_filter, segment_sentences,
                               strip_and_tokenize)
from topicsum.errors import ConfigurationError

WORDS = st.sampled_from([
    "hair", "knot", "brush", "comb", "finger", "running", "ran", "runs",
    "boxes", "inches", "the", "and", "should", "cafe", "product", "knots",
    "gently", "large", "wide", "toothed", "combing", "strokes", "apply",
])


class TestSegmentSentences:
    def test_simple_delimiters(self):
        group = segment_sentences("A. B? C!")
        assert group.texts == ["A.", "B?", "C!"]
        assert [i for i, _ in group.sentences] == [0, 1, 2]

    def test_decimal_not_a_boundary(self):
        group = segment_sentences("The gap is approx 3.5 cm wide")
        assert group.texts == ["The gap is approx 3.5 cm wide"]

    def test_abbreviation_guard(self):
        group = segment_sentences("Ask Dr. Smith first. Then call back.")
        assert group.texts == ["Ask Dr. Smith first.", "Then call back."]

    def test_no_terminator_is_single_sentence(self):
        group = segment_sentences("no punctuation here at all")
        assert group.texts == ["no punctuation here at all"]

    def test_sample_article_first_sentence(self, sample_article):
        group = segment_sentences(sample_article)
        assert group.texts[0] == ("Before brushing long hair, you should "
                                  "check for major knots.")

    def test_exclamations_grouped(self):
        group = segment_sentences("Wait!! Really?! Yes.")
        assert group.texts == ["Wait!!", "Really?!", "Yes."]

    @given(st.text(alphabet="abcDEF .!?\n,3", min_size=1, max_size=200))
    @settings(max_examples=200)
    def test_no_characters_dropped(self, article):
        group = segment_sentences(article)
        rebuilt = "".join("".join(t.split()) for t in group.texts)
        assert rebuilt == "".join(article.split())

    def test_indices_consecutive(self, sample_article):
        group = segment_sentences(sample_article)
        assert [i for i, _ in group.sentences] == list(range(len(group)))


class TestStripAndTokenize:
    def test_empty(self, stopwords):
        assert strip_and_tokenize("", stopwords) == []

    def test_all_stopwords(self):
        assert strip_and_tokenize("The THE the", {"the"}) == []

    def test_accent_folding(self, stopwords):
        assert strip_and_tokenize("Café-style décor!", stopwords) == \
            ["cafe", "style", "decor"]

    def test_order_preserved(self, stopwords):
        out = strip_and_tokenize("Comb the hair, comb the knot.", stopwords)
        assert out == ["comb", "hair", "comb", "knot"]

    @given(st.lists(WORDS, max_size=30))
    def test_output_charset(self, stopwords, words):
        for tok in strip_and_tokenize(" ".join(words), stopwords):
            assert tok == tok.lower()
            assert all(c.isalnum() or c == "_" for c in tok)
            assert tok not in stopwords


class TestLearnPhrases:
    def make_pair_corpus(self):
        # "new york" 50 times, never apart; 998 distinct fillers spread so
        # the vocabulary is exactly 1000
        docs = []
        fillers = iter(f"filler{i}" for i in range(998))
        for _ in range(50):
            docs.append(["new", "york"])
        chunk = []
        for f in fillers:
            chunk.append(f)
            if len(chunk) == 20:
                docs.append(chunk)
                chunk = []
        if chunk:
            docs.append(chunk)
        return docs

    def test_hand_scored_pair_retained(self):
        model = learn_phrases(self.make_pair_corpus(), min_count=5, threshold=10.0)
        assert ("new", "york") in model.pair_scores
        # (50 - 5) * 1000 / (50 * 50) = 18
        assert model.pair_scores[("new", "york")] == pytest.approx(18.0)

    def test_below_min_count_not_retained(self):
        docs = [["rare", "pair"]] + [[f"x{i}"] for i in range(20)]
        model = learn_phrases(docs, min_count=5, threshold=0.0)
        assert ("rare", "pair") not in model.pair_scores

    def test_min_count_zero_rejected(self):
        with pytest.raises(ConfigurationError):
            learn_phrases([["a", "b"]], min_count=0)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ConfigurationError):
            learn_phrases([], min_count=5)
        with pytest.raises(ConfigurationError):
            learn_phrases([[], []], min_count=5)

    def test_trigrams_need_two_rounds(self):
        # round 1: (30 - 5) * 3 / (30 * 30) = 0.0833; round 2 on the joined
        # corpus: (30 - 5) * 2 / (30 * 30) = 0.0556; both clear 0.05
        docs = [["new", "york", "city"] for _ in range(30)]
        model = learn_phrases(docs, min_count=5, threshold=0.05)
        assert ("new", "york") in model.pair_scores
        assert ("new_york", "city") in model.pair_scores

    def test_save_load_roundtrip(self, tmp_path):
        model = learn_phrases(self.make_pair_corpus(), min_count=5, threshold=10.0)
        path = tmp_path / "phrases.tsv"
        model.save(path)
        loaded = PhraseModel.load(path)
        assert loaded.pair_scores == model.pair_scores
        assert loaded.pair_counts == model.pair_counts
        assert loaded.min_count == model.min_count


class TestApplyPhrases:
    def model_with(self, *pairs):
        return PhraseModel(min_count=5, threshold=10.0,
                           pair_scores={p: 11.0 for p in pairs},
                           pair_counts={p: 6 for p in pairs})

    def test_two_pass_trigram(self):
        model = self.model_with(("new", "york"), ("new_york", "city"))
        assert apply_phrases(["new", "york", "city"], model) == ["new_york_city"]

    def test_no_pairs_is_identity(self):
        model = PhraseModel.empty()
        assert apply_phrases(["a", "b", "c"], model) == ["a", "b", "c"]

    def test_greedy_non_overlapping(self):
        model = self.model_with(("a", "a"))
        assert apply_phrases(["a", "a", "a"], model) == ["a_a", "a"]

    @given(st.lists(WORDS, max_size=25))
    def test_underlying_word_count_preserved(self, tokens):
        model = self.model_with(("hair", "knot"), ("brush", "comb"))
        joined = apply_phrases(tokens, model)
        assert sum(len(t.split("_")) for t in joined) == len(tokens)


class TestLemmatizeFilter:
    def test_inflections(self):
        assert lemmatize_filter(["brushing", "knots"]) == ["brush", "knot"]

    def test_empty(self):
        assert lemmatize_filter([]) == []

    def test_irregular_and_regular_verbs(self):
        assert lemmatize_filter(["running", "ran", "runs"]) == ["run", "run", "run"]

    def test_non_content_pos_dropped(self):
        assert lemmatize_filter(["oh", "hair", "the", "into"]) == ["hair"]

    def test_unknown_word_defaults_to_noun(self):
        assert lemmatize_filter(["zyzzyva"]) == ["zyzzyva"]

    def test_phrase_tokens_untouched(self):
        assert lemmatize_filter(["wide_toothed_comb"]) == ["wide_toothed_comb"]

    def test_lemma_rules(self):
        assert lemma("boxes") == "box"
        assert lemma("inches") == "inch"
        assert lemma("bodies") == "body"
        assert lemma("stopped") == "stop"
        assert lemma("making") == "make"
        assert lemma("detangling") == "detangle"
        assert lemma("classes") == "class"
        assert lemma("goes") == "go"


class TestCleanDocument:
    def jaccard(self, a, b):
        ca, cb = Counter(a), Counter(b)
        return sum((ca & cb).values()) / sum((ca | cb).values())

    def test_sample_article_fidelity(self, sample_article, sample_expected_tokens,
                                     sample_cleaner):
        doc = sample_cleaner.clean(sample_article)
        assert self.jaccard(doc.tokens, sample_expected_tokens) >= 0.7

    def test_all_stopword_article(self, stopwords):
        doc = clean_document("The and of to!", stopwords, PhraseModel.empty())
        assert doc.tokens == []

    def test_inflection_family(self, stopwords):
        doc = clean_document("Combing combs combed", stopwords, PhraseModel.empty())
        assert doc.tokens == ["comb", "comb", "comb"]

    def test_no_stopword_survives_lemmatization(self, stopwords):
        # "cans" lemmatizes to the stopword "can"; the output must not keep it
        doc = clean_document("Recycle old cans", stopwords, PhraseModel.empty())
        assert "can" not in doc.tokens

    @given(st.lists(WORDS, max_size=30))
    @settings(max_examples=150)
    def test_idempotent_on_own_output(self, stopwords, words):
        model = PhraseModel(min_count=5, threshold=10.0,
                            pair_scores={("wide", "toothed"): 11.0,
                                         ("wide_toothed", "comb"): 11.0},
                            pair_counts={("wide", "toothed"): 6,
                                         ("wide_toothed", "comb"): 6})
        first = clean_document(" ".join(words), stopwords, model).tokens
        second = clean_document(" ".join(first), stopwords, model).tokens
        assert second == first


class TestCleaningContext:
    def test_default_context(self):
        context = CleaningContext.default()
        assert context.clean("Brushing knots!").tokens == ["brush", "knot"]
        assert context.phrases.pair_scores == {}
