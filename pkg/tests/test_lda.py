import logging
import math
import random

import pytest

from conftest import greedy_topic_match
from topicsum.errors import (ConfigurationError, EmptyCorpusError,
                             IntegrityError)
from topicsum.lda import (LdaConfig, LdaModel, build_topic_report,
                          dominant_topic, infer_theta, perplexity, train,
                          umass_coherence)
from topicsum.vocabulary import BowCorpus, build_dictionary


def tiny_model(docs, K=1, sweeps=1, seed=3, alpha=0.5, beta=0.01):
    dictionary = build_dictionary(docs, no_below=0, no_above=1.0)
    corpus = BowCorpus.from_cleaned(docs, dictionary)
    config = LdaConfig(K=K, alpha=alpha, beta=beta, sweeps=sweeps,
                       burn_in=0, seed=seed)
    return train(corpus, dictionary, config), dictionary, corpus


def permute_model(model, perm):
    """Relabeled copy: new topic k carries old topic perm[k]'s counts."""
    clone = LdaModel(model.config, model.dictionary, docs=[])
    for w in range(model.V):
        for new_k, old_k in enumerate(perm):
            clone.n_wk[w][new_k] = model.n_wk[w][old_k]
    clone.n_k = [model.n_k[old_k] for old_k in perm]
    return clone


class TestConfig:
    def test_alpha_defaults_to_50_over_k(self):
        assert LdaConfig(K=20).alpha == pytest.approx(2.5)
        assert LdaConfig(K=10).alpha == pytest.approx(5.0)

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigurationError):
            LdaConfig(K=0)
        with pytest.raises(ConfigurationError):
            LdaConfig(alpha=-1.0)
        with pytest.raises(ConfigurationError):
            LdaConfig(beta=0.0)
        with pytest.raises(ConfigurationError):
            LdaConfig(sweeps=10, burn_in=10)

    def test_json_roundtrip(self):
        config = LdaConfig(K=7, sweeps=50, burn_in=5, seed=42)
        assert LdaConfig.from_json_dict(config.to_json_dict()) == config


class TestTraining:
    def test_single_topic_is_smoothed_unigram(self):
        model, dictionary, _ = tiny_model([["a", "a", "a", "b"]], K=1)
        beta = model.config.beta
        expected_a = (3 + beta) / (4 + 2 * beta)
        expected_b = (1 + beta) / (4 + 2 * beta)
        row = model.phi_row(0)
        assert row[dictionary.token_to_id["a"]] == pytest.approx(expected_a)
        assert row[dictionary.token_to_id["b"]] == pytest.approx(expected_b)

    def test_same_seed_bit_identical(self, synthetic):
        config = LdaConfig(K=3, alpha=0.1, beta=0.01, sweeps=20, burn_in=0, seed=5)
        m1 = train(synthetic.corpus, synthetic.dictionary, config)
        m2 = train(synthetic.corpus, synthetic.dictionary, config)
        assert m1.n_wk == m2.n_wk
        assert m1.n_dk == m2.n_dk
        assert m1.z == m2.z

    def test_empty_corpus_rejected(self):
        dictionary = build_dictionary([["a"]], no_below=0, no_above=1.0)
        with pytest.raises(EmptyCorpusError):
            LdaModel.initialize(BowCorpus(docs=[[]]), dictionary,
                                LdaConfig(K=2, sweeps=1, burn_in=0))

    def test_k_above_token_count_warns(self, caplog):
        dictionary = build_dictionary([["a"]], no_below=0, no_above=1.0)
        corpus = BowCorpus.from_cleaned([["a"]], dictionary)
        with caplog.at_level(logging.WARNING):
            LdaModel.initialize(corpus, dictionary,
                                LdaConfig(K=5, sweeps=1, burn_in=0))
        assert any("exceeds corpus token count" in r.message for r in caplog.records)

    def test_count_consistency_over_sweeps(self):
        rng = random.Random(4)
        docs = [[f"w{rng.randrange(30)}" for _ in range(25)] for _ in range(12)]
        dictionary = build_dictionary(docs, no_below=0, no_above=1.0)
        corpus = BowCorpus.from_cleaned(docs, dictionary)
        model = LdaModel.initialize(corpus, dictionary,
                                    LdaConfig(K=4, alpha=0.2, beta=0.05,
                                              sweeps=10, burn_in=0, seed=8))
        model.verify_counts()
        for _ in range(10):
            model.run_sweeps(1)
            model.verify_counts()

    def test_verify_counts_detects_corruption(self):
        model, _, _ = tiny_model([["a", "b", "a"]], K=2)
        model.n_k[0] += 1
        with pytest.raises(IntegrityError):
            model.verify_counts()

    def test_probability_rows(self, synthetic_model):
        for k in range(synthetic_model.config.K):
            row = synthetic_model.phi_row(k)
            assert all(p > 0 for p in row)
            assert math.isclose(sum(row), 1.0, abs_tol=1e-9)
        for d in range(len(synthetic_model.docs)):
            theta = synthetic_model.theta_row(d)
            assert all(p > 0 for p in theta)
            assert math.isclose(sum(theta), 1.0, abs_tol=1e-9)


class TestSyntheticRecovery:
    def test_phi_recovered_up_to_permutation(self, synthetic, synthetic_model):
        _, mean_l1 = greedy_topic_match(synthetic, synthetic_model)
        assert mean_l1 < 0.2

    def test_single_topic_sentences_classified(self, synthetic, synthetic_model):
        mapping, _ = greedy_topic_match(synthetic, synthetic_model)
        rng = random.Random(99)
        correct = 0
        total = 300
        for i in range(total):
            true_topic = i % synthetic.n_topics
            tokens = synthetic.draw_topic_sentence(true_topic, 10, rng)
            got, flagged = dominant_topic(tokens, synthetic_model, seed=1000 + i)
            if got == mapping[true_topic] and not flagged:
                correct += 1
        assert correct / total >= 0.95


class TestInference:
    def test_k1_theta_is_one(self):
        model, _, _ = tiny_model([["a", "b"]], K=1)
        theta, flagged = infer_theta(["a"], model, seed=1)
        assert theta == [1.0]
        assert not flagged
        assert dominant_topic(["a"], model, seed=1) == (0, False)

    def test_oov_tokens_unassignable(self, synthetic_model):
        K = synthetic_model.config.K
        theta, flagged = infer_theta(["nope", "missing"], synthetic_model, seed=2)
        assert flagged
        assert theta == [1.0 / K] * K
        assert dominant_topic([], synthetic_model, seed=2) == (0, True)

    def test_theta_sums_to_one(self, synthetic, synthetic_model):
        rng = random.Random(5)
        tokens = synthetic.draw_topic_sentence(1, 25, rng)
        theta, _ = infer_theta(tokens, synthetic_model, seed=6)
        assert math.isclose(sum(theta), 1.0, abs_tol=1e-9)
        assert all(p > 0 for p in theta)

    def test_fixed_seed_reproducible(self, synthetic, synthetic_model):
        tokens = synthetic.draw_topic_sentence(0, 15, random.Random(1))
        a, _ = infer_theta(tokens, synthetic_model, seed=77)
        b, _ = infer_theta(tokens, synthetic_model, seed=77)
        assert a == b


class TestPerplexity:
    def test_uniform_phi_gives_exactly_v(self, synthetic):
        config = LdaConfig(K=3, alpha=0.1, beta=0.01, sweeps=1, burn_in=0, seed=1)
        uniform = LdaModel(config, synthetic.dictionary, docs=[])
        value = perplexity(uniform, synthetic.corpus, seed=3)
        V = synthetic.dictionary.size
        assert abs(value - V) / V < 1e-6

    def test_trained_beats_one_sweep(self, synthetic, synthetic_model):
        one_sweep = train(synthetic.corpus, synthetic.dictionary,
                          LdaConfig(K=3, alpha=0.1, beta=0.01, sweeps=1,
                                    burn_in=0, seed=11))
        trained = perplexity(synthetic_model, synthetic.corpus, seed=3)
        crude = perplexity(one_sweep, synthetic.corpus, seed=3)
        assert trained < crude

    def test_never_worse_than_uniform_on_training_set(self, synthetic,
                                                      synthetic_model):
        value = perplexity(synthetic_model, synthetic.corpus, seed=3)
        assert value <= synthetic.dictionary.size

    def test_no_in_vocab_tokens_rejected(self, synthetic_model):
        with pytest.raises(EmptyCorpusError):
            perplexity(synthetic_model, BowCorpus(docs=[[]]), seed=1)

    def test_permutation_symmetry(self, synthetic, synthetic_model):
        base = perplexity(synthetic_model, synthetic.corpus, seed=3)
        for perm in ([1, 2, 0], [2, 1, 0]):
            relabeled = permute_model(synthetic_model, perm)
            value = perplexity(relabeled, synthetic.corpus, seed=3)
            assert abs(value - base) <= 1e-9 * max(1.0, base)


class TestCoherence:
    def test_top_m_one_is_zero(self):
        model, _, _ = tiny_model([["a", "a", "b"]], K=1)
        assert umass_coherence(model, BowCorpus(docs=[[(0, 1)]]), top_m=1) == [0.0]

    def test_cooccurring_pair(self):
        model, dictionary, _ = tiny_model([["a", "a", "a", "b"]], K=1)
        both = BowCorpus.from_cleaned([["a", "b"]] * 10, dictionary)
        scores = umass_coherence(model, both, top_m=2)
        assert scores[0] == pytest.approx(math.log(11 / 10), abs=1e-12)

    def test_never_cooccurring_pair(self):
        model, dictionary, _ = tiny_model([["a", "a", "a", "b"]], K=1)
        apart = BowCorpus.from_cleaned([["a"]] * 10 + [["b"]] * 5, dictionary)
        scores = umass_coherence(model, apart, top_m=2)
        assert scores[0] == pytest.approx(math.log(1 / 10), abs=1e-12)

    def test_unseen_denominator_word_skipped(self):
        model, dictionary, _ = tiny_model([["a", "a", "a", "b"]], K=1)
        empty_for_a = BowCorpus.from_cleaned([["b"]] * 4, dictionary)
        scores = umass_coherence(model, empty_for_a, top_m=2)
        assert scores == [0.0]

    def test_invalid_top_m(self, synthetic_model):
        with pytest.raises(ConfigurationError):
            umass_coherence(synthetic_model, BowCorpus(docs=[]), top_m=0)


class TestPersistence:
    def test_save_load_roundtrip(self, synthetic, synthetic_model, tmp_path):
        path = tmp_path / "model.lda"
        synthetic_model.save(path)
        loaded = LdaModel.load(path, synthetic.dictionary)
        assert loaded.n_k == synthetic_model.n_k
        assert loaded.n_wk == synthetic_model.n_wk
        assert loaded.config == synthetic_model.config
        theta_a, _ = infer_theta(["t0w0", "t0w1"], synthetic_model, seed=5)
        theta_b, _ = infer_theta(["t0w0", "t0w1"], loaded, seed=5)
        assert theta_a == theta_b

    def test_dictionary_hash_verified(self, synthetic, synthetic_model, tmp_path):
        path = tmp_path / "model.lda"
        synthetic_model.save(path)
        other = build_dictionary([[f"t{t}w{i}" for i in range(10)]
                                  for t in range(3)] + [["extra"]],
                                 no_below=0, no_above=1.0)
        with pytest.raises(ConfigurationError):
            LdaModel.load(path, other)

    def test_bad_magic_rejected(self, synthetic, tmp_path):
        path = tmp_path / "model.lda"
        path.write_text("not a model\n")
        with pytest.raises(ConfigurationError):
            LdaModel.load(path, synthetic.dictionary)


class TestTopicReport:
    def test_report_shape_and_json(self, synthetic, synthetic_model):
        report = build_topic_report(synthetic_model, synthetic.corpus,
                                    synthetic.corpus, top_m=5, seed=3)
        assert len(report.top_words) == 3
        assert len(report.coherence) == 3
        for words in report.top_words:
            probs = [p for _, p in words]
            assert probs == sorted(probs, reverse=True)
        payload = report.to_json()
        assert '"perplexity"' in payload

    def test_top_words_tie_break_toward_low_id(self):
        model, dictionary, _ = tiny_model([["a", "b"]], K=1)
        words = model.top_words(0, 2)
        assert [w for w, _ in words] == ["a", "b"]
