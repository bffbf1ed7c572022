"""
Grouping a target's words, then a first PU pass
================================================

One synthetic review domain. We train skip-gram vectors on it, list the
words nearest to the target, and ask a plain PU classifier (lexicon words as
positives, everything else unlabeled) which of them are opinion words.
"""

from lifelong_pu import (
    PuOptions,
    SyntheticSpec,
    build_vocabulary,
    disentangle,
    generate_synthetic,
    label_split,
    query_target,
    train_pu,
    train_skipgram,
)
from lifelong_pu.evaluation import BENCHMARK_SKIPGRAM

# a single domain is enough here
spec = SyntheticSpec(n_domains=1, opinion_support=1, min_support=1)
bench = generate_synthetic(spec, seed=0)
docs = bench.corpora[bench.domain_ids[0]]
print(len(docs), "documents, e.g.:", docs[0].text)

vocab = build_vocabulary(docs, min_count=5)
E = train_skipgram(docs, vocab, BENCHMARK_SKIPGRAM)
print("vocabulary:", len(vocab), "words; loss per epoch:", [round(x, 3) for x in E.epoch_losses])

# ---------------------------------------------------------------------------
# Stage one: t-words are just nearest neighbors of the target

t_words = query_target(E, "target0", 60)
for word, score in t_words.t_words[:10]:
    print(f"  {word:10s} {score:.3f}  {bench.label(word).value}")

# ---------------------------------------------------------------------------
# Stage two, without any past knowledge

split = label_split(vocab.words, bench.lexicon)
print(len(split.positives), "lexicon positives,", len(split.unlabeled), "unlabeled")

# planted opinion words are unlabeled, so naive PU pushes them towards 0;
# up-weighting the positives keeps the decision boundary reasonable
clf = train_pu(E, split, PuOptions(positive_weight=3.0))
parts = disentangle(t_words, clf, E, split.positives)
print(len(parts.aspect), "aspect words, e.g.", [w for w, _ in parts.aspect[:5]])
print(len(parts.opinion), "opinion words, e.g.", [w for w, _ in parts.opinion[:5]])

wrong = [w for w, lab in parts.labels().items() if lab is not bench.label(w)]
print("mislabelled t-words:", wrong or "none")
