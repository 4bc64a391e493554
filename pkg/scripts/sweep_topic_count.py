#!/usr/bin/env python3
"""Model-selection experiment: train LDA over a range of topic counts and
report held-out perplexity and mean UMass coherence for each.

Usage:
    python scripts/sweep_topic_count.py corpus.csv --k 5 10 20 40
"""

import argparse

from topicsum.cleaning import CleaningContext, learn_phrases, load_stopwords
from topicsum.dataset import ingest_csv
from topicsum.lda import LdaConfig, perplexity, train, umass_coherence
from topicsum.pipeline import is_heldout
from topicsum.vocabulary import BowCorpus, build_dictionary


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("corpus", help="corpus CSV path")
    parser.add_argument("--k", type=int, nargs="+", default=[5, 10, 20, 40])
    parser.add_argument("--sweeps", type=int, default=300)
    parser.add_argument("--limit", type=int, default=None)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    stopwords = load_stopwords()
    pairs, _ = ingest_csv(args.corpus, limit=args.limit)
    pairs = list(pairs)
    from topicsum.cleaning import strip_and_tokenize
    stripped = [strip_and_tokenize(p.article, stopwords) for p in pairs]
    phrases = learn_phrases(stripped)
    cleaner = CleaningContext(stopwords=stopwords, phrases=phrases)
    cleaned = [cleaner.clean(p.article, doc_id=p.id) for p in pairs]

    train_docs = [d for d, p in zip(cleaned, pairs) if not is_heldout(p.id)]
    held_docs = [d for d, p in zip(cleaned, pairs) if is_heldout(p.id)]
    dictionary = build_dictionary(train_docs)
    corpus = BowCorpus.from_cleaned(train_docs, dictionary)
    held_out = BowCorpus(docs=[b for b in
                               BowCorpus.from_cleaned(held_docs, dictionary).docs
                               if b]) if held_docs else corpus

    print(f"{'K':>4}  {'perplexity':>12}  {'mean coherence':>15}")
    for k in args.k:
        config = LdaConfig(K=k, sweeps=args.sweeps,
                           burn_in=min(100, args.sweeps - 1), seed=args.seed)
        model = train(corpus, dictionary, config)
        pp = perplexity(model, held_out, seed=args.seed)
        coherence = umass_coherence(model, corpus, top_m=10)
        mean_coherence = sum(coherence) / len(coherence)
        print(f"{k:>4}  {pp:>12.2f}  {mean_coherence:>15.2f}")


if __name__ == "__main__":
    main()
