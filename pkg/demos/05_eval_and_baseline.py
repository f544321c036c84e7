"""Replay the packaged regression corpus and compare against chance."""

from importlib import resources

from bishop import default_lexicon
from bishop.corpus import chance_baseline, evaluate, load_corpus

packaged = resources.files("bishop").joinpath("data/corpus/regression.jsonl")
with resources.as_file(packaged) as path:
    records = load_corpus(path)

report = evaluate(records, default_lexicon())
print(report.render())

print()
h30 = sum(1.0 / i for i in range(1, 31))
mean, stderr = chance_baseline(sessions=10_000, trials=30, seed=0)
print("random-listener chance performance:")
print(f"  analytic H_30/30      = {h30 / 30:.4f}")
print(f"  monte carlo (10k x30) = {mean:.4f} +- {stderr:.4f}")
