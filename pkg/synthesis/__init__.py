"""
Synthetic benchmarks: planted groups in a random background multigraph,
with the ground-truth SGIs and a sampled training set.
"""
