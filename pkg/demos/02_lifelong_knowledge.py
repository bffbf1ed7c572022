"""
Borrowing opinion words from past domains
=========================================

Six synthetic domains share a pool of opinion words that the lexicon does not
list. Each past domain is classified on its own and its predicted opinion
words go into a knowledge base. Words predicted in enough domains are then
trusted as extra positives in the last domain, but only when the neighbor
table backs them up.
"""

from lifelong_pu import SyntheticSpec, Variant, compare_variants, generate_synthetic, mine_reliable, prepare_benchmark

bench = generate_synthetic(SyntheticSpec(), seed=1)
print(bench.n_domains, "domains;", len(bench.planted_opinion), "opinion words missing from the lexicon")

# trains one embedding per domain and accumulates the knowledge base
prepared = prepare_benchmark(bench)
for record in prepared.kb:
    found = record.opinion_words & bench.planted_opinion
    print(f"  {record.domain_id}: {len(record.opinion_words):3d} predicted, {len(found):2d} planted")

# ---------------------------------------------------------------------------
# What mining offers the last domain (its own record is left out)

current = bench.domain_ids[-1]
mined = mine_reliable(prepared.kb, prepared.config.min_support, exclude=current)
print("mined:", len(mined), "words,", len(mined.words & bench.planted_opinion), "of them planted")

# ---------------------------------------------------------------------------
# Lifelong run against the single-domain baseline

report = compare_variants(prepared, [Variant.NLL, Variant.LPU_MINOR, Variant.LPU])
print(report.to_csv())

for variant in ("nll", "lpu"):
    result = report.results[(variant, current)]
    print(f"{variant}: {len(result.w_plus & bench.planted_opinion)}/{len(bench.planted_opinion)} planted words "
          f"recovered, {len(result.iteration_log)} iterations")

lpu = report.results[("lpu", current)]
print("seed words (reliable neighbors that were also mined):", sorted(lpu.seed)[:8], "...")
for rec in lpu.iteration_log:
    print(f"  t={rec.t}  reliable={rec.n_reliable:3d}  predicted={rec.n_predicted:3d}  next={rec.n_new}")
