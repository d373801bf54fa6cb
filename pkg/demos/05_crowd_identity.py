"""
The crowd-error identity as a diagnostic
========================================

For any set of individual estimates of a true value, with the crowd taken
as their mean:

    crowd squared error = average individual squared error - diversity

This is algebra, not statistics -- it holds for every crowd, so the crowd
is never worse than its average member, and it beats the average member by
exactly how much the members disagree. The aggregation layer reuses it to
grade a clustering round: each cluster's best correlation is one "opinion"
about the corpus-wide best.
"""

import numpy as np

from layerstack import (
    CrowdPrediction,
    aggregate_corpus,
    aggregate_round_quality,
    crowd_decomposition,
    synthetic_corpus,
)

# A crowd of 7 forecasters guessing a quantity whose true value is 50.
guesses = np.array([38.0, 44.0, 47.0, 51.0, 55.0, 58.0, 66.0])
d = crowd_decomposition(CrowdPrediction(guesses, truth=50.0))
print(f"crowd mean                {d.crowd_mean:.3f}")
print(f"crowd squared error       {d.crowd_sq_error:.3f}")
print(f"avg individual sq error   {d.avg_individual_sq_error:.3f}")
print(f"diversity                 {d.diversity:.3f}")
print(f"identity residual         {d.crowd_sq_error + d.diversity - d.avg_individual_sq_error:.2e}")

# A diverse crowd and a clone crowd with the same mean: identical crowd
# error, but the clones' average member is exactly as wrong as the crowd.
clones = np.full(7, guesses.mean())
dc = crowd_decomposition(CrowdPrediction(clones, truth=50.0))
print(f"\nclone crowd:   diversity {dc.diversity:.3f}, avg member error {dc.avg_individual_sq_error:.3f}")
print(f"diverse crowd: diversity {d.diversity:.3f}, avg member error {d.avg_individual_sq_error:.3f}")

# Now grade an aggregation round: per-cluster best correlations versus the
# global best over the survivors.
corpus, _ = synthetic_corpus((18, 12, 6), seed=0)
result = aggregate_corpus(corpus, k=3, rounds=1, per_cluster=3, seed=42)
per_cluster_best = [ranked[0].r for ranked in result.rounds[0].cluster_rankings if ranked]
global_best = result.ranking[0].r
quality = aggregate_round_quality(per_cluster_best, global_best)
print(f"\ncluster bests {np.round(per_cluster_best, 3)} vs global best {global_best:.3f}")
print(f"round diversity {quality.diversity:.5f}: how much the clusters disagree")
